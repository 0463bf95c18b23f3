#include "mlefit/special_fn.hpp"

#include "mlefit/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace mlefit::special {

namespace {

// Neumaier's variant of compensated summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

// Godfrey's Lanczos coefficients for g = 607/128.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};

// B_2 .. B_20
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,          -1.0 / 30.0,    1.0 / 42.0,          -1.0 / 30.0,
    5.0 / 66.0,         -691.0 / 2730.0, 7.0 / 6.0,          -3617.0 / 510.0,
    43867.0 / 798.0,    -174611.0 / 330.0,
};

// Recurrence shift targets for the asymptotic expansions.
constexpr double kPsiShift = 6.0;
// std::tgamma overflows just above 171.6.
constexpr double kDirectGammaLimit = 170.0;
constexpr double kHigherPolygammaShift = 10.0;

void require_positive(double tau, const char* what) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw DomainError(std::string(what) + ": argument must satisfy tau > 0");
    }
}

double digamma_asymptotic(double x) {
    const double inv2 = 1.0 / (x * x);
    double series = 0.0;
    double power = inv2;
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
        series += kBernoulli[k] / (2.0 * static_cast<double>(k + 1)) * power;
        power *= inv2;
    }
    return std::log(x) - 0.5 / x - series;
}

// psi^(n)(x) for n >= 1 and large x:
// (-1)^(n+1) [ (n-1)!/x^n + n!/(2 x^(n+1)) + sum_k B_2k (2k+n-1)!/(2k)! / x^(2k+n) ]
double polygamma_asymptotic(int n, double x) {
    double factorial_nm1 = 1.0;
    for (int i = 2; i < n; ++i) {
        factorial_nm1 *= i;
    }
    const double factorial_n = factorial_nm1 * n;
    const double xn = std::pow(x, n);
    double value = factorial_nm1 / xn + factorial_n / (2.0 * xn * x);
    const double inv2 = 1.0 / (x * x);
    double power = 1.0 / xn * inv2;
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
        const int two_k = 2 * static_cast<int>(k + 1);
        // (2k+n-1)! / (2k)! = (2k+1)(2k+2)...(2k+n-1)
        double ratio = 1.0;
        for (int j = two_k + 1; j <= two_k + n - 1; ++j) {
            ratio *= j;
        }
        value += kBernoulli[k] * ratio * power;
        power *= inv2;
    }
    return (n % 2 == 1) ? value : -value;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

} // namespace

double log_gamma(double tau) {
    require_positive(tau, "log_gamma");
    if (tau == 1.0 || tau == 2.0) {
        return 0.0;
    }
    if (tau < 0.5) {
        // Reflection keeps the Lanczos sum on its accurate half-line.
        return std::log(pi / std::sin(pi * tau)) - log_gamma(1.0 - tau);
    }
    const double x = tau - 1.0;
    double a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        a += kLanczos[i] / (x + static_cast<double>(i));
    }
    const double t = x + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

namespace {

// |tau|^k / Gamma(g). The direct quotient keeps each term within a few ulps;
// the log form takes over once either factor would overflow.
double series_term_magnitude(double abs_tau, double log_abs_tau, double g, int k) {
    if (g < kDirectGammaLimit) {
        const double power = std::pow(abs_tau, k);
        if (std::isfinite(power) && power > 0.0) {
            return power / std::tgamma(g);
        }
    }
    return std::exp(k * log_abs_tau - log_gamma(g));
}

} // namespace

double mittag_leffler(double alpha, double nu, double tau) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("mittag_leffler: alpha must satisfy 0 < alpha <= 1");
    }
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw DomainError("mittag_leffler: nu must satisfy nu > 0");
    }
    if (!std::isfinite(tau)) {
        throw DomainError("mittag_leffler: tau must be finite");
    }
    if (tau == 0.0) {
        return std::exp(-log_gamma(nu));
    }
    const double log_abs_tau = std::log(std::abs(tau));
    if (log_abs_tau / alpha > std::log(kMittagLefflerGuard)) {
        throw DomainError("mittag_leffler: |tau|^(1/alpha) exceeds the overflow guard of 700");
    }

    CompensatedSum sum;
    double previous_magnitude = std::numeric_limits<double>::infinity();
    double largest = 0.0;
    int small_run = 0;
    for (int k = 0; k < kSeriesTermBudget; ++k) {
        const double magnitude = series_term_magnitude(std::abs(tau), log_abs_tau, nu + k * alpha, k);
        const double term = (tau < 0.0 && (k % 2 == 1)) ? -magnitude : magnitude;
        sum.add(term);
        largest = std::max(largest, magnitude);
        const bool decreasing = magnitude <= previous_magnitude;
        previous_magnitude = magnitude;
        if (decreasing && magnitude < 1e-16 * std::abs(sum.value())) {
            if (++small_run == 2) {
                const double value = sum.value();
                if (largest * std::numeric_limits<double>::epsilon()
                    > kMittagLefflerCancellationLimit * std::max(1.0, std::abs(value))) {
                    throw ConvergenceError(
                        "mittag_leffler: alternating series loses too many digits to cancellation");
                }
                return value;
            }
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("mittag_leffler: series did not converge within the term budget");
}

double digamma(double tau, PsiMode mode) {
    require_positive(tau, "digamma");
    if (mode == PsiMode::PaperTruncated) {
        const double t2 = tau * tau;
        const double t4 = t2 * t2;
        const double t6 = t4 * t2;
        return std::log(tau) - 1.0 / (2.0 * tau) - 1.0 / (12.0 * t2) + 1.0 / (120.0 * t4)
               - 1.0 / (252.0 * t6);
    }
    double shift = 0.0;
    double x = tau;
    while (x < kPsiShift) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    return digamma_asymptotic(x) + shift;
}

double trigamma(double tau, PsiMode mode) {
    require_positive(tau, "trigamma");
    if (mode == PsiMode::PaperTruncated) {
        const double t2 = tau * tau;
        const double t3 = t2 * tau;
        const double t5 = t3 * t2;
        const double t7 = t5 * t2;
        return 1.0 / tau + 1.0 / (2.0 * t2) + 1.0 / (6.0 * t3) - 1.0 / (30.0 * t5)
               + 1.0 / (42.0 * t7);
    }
    return polygamma(1, tau);
}

double polygamma(int order, double tau) {
    if (order < 0 || order > 3) {
        throw DomainError("polygamma: order must be in 0..3");
    }
    require_positive(tau, "polygamma");
    if (order == 0) {
        return digamma(tau, PsiMode::Accurate);
    }
    // psi^(n)(x) = psi^(n)(x+1) + (-1)^(n+1) n! / x^(n+1)
    const double threshold = order == 1 ? kPsiShift : kHigherPolygammaShift;
    const double step = (order % 2 == 1 ? 1.0 : -1.0) * factorial(order);
    double shift = 0.0;
    double x = tau;
    while (x < threshold) {
        shift += step / std::pow(x, order + 1);
        x += 1.0;
    }
    return polygamma_asymptotic(order, x) + shift;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal_quantile: p must satisfy 0 < p < 1");
    }
    if (p > 0.5) {
        // 1 - p is exact here, and the Halley residual below stays free of
        // cancellation only in the lower tail
        return -normal_quantile(1.0 - p);
    }
    // Acklam's rational approximation (relative error 1.15e-9) followed by
    // one Halley step against erfc, which brings it to machine precision.
    static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                                -2.759285104469687e+02, 1.383577518672690e+02,
                                                -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                                -1.556989798598866e+02, 6.680131188771972e+01,
                                                -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                                -2.400758277161838e+00, -2.549732539343734e+00,
                                                4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x = 0.0;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

} // namespace mlefit::special
