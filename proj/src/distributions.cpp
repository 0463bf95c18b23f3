#include "mlefit/distributions.hpp"

#include "mlefit/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mlefit {

using special::euler_gamma;
using special::log_gamma;
using special::pi;
using special::zeta3;

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must satisfy 0 < α ≤ 1 (got " + std::to_string(alpha) + ")");
    }
}

constexpr double kPi2Over6 = pi * pi / 6.0;

// Integral representation of the ML density for alpha < 1.
double ml_pdf_mixture(double alpha, double delta, double t) {
    const double theta = alpha * pi;
    const double sin_theta = std::sin(theta);
    const double two_cos_theta = 2.0 * std::cos(theta);
    // g(eta) = sin(theta) / (pi (eta^alpha + eta^-alpha + 2 cos theta))
    auto integrand = [&](double xi) {
        const double u = alpha * std::log(t / (delta * xi));
        const double denom = 2.0 * std::cosh(u) + two_cos_theta;
        if (!std::isfinite(denom)) {
            return 0.0;
        }
        return std::exp(-xi) * sin_theta / (pi * denom);
    };
    // integrate() is not const-qualified in older Boost releases
    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    const double integral = integrator.integrate(integrand, 1e-13);
    return integral / t;
}

} // namespace

MLParams::MLParams(double alpha, double delta) : alpha_(alpha), delta_(delta) {
    require_alpha(alpha);
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw DomainError("delta must satisfy δ > 0 (got " + std::to_string(delta) + ")");
    }
}

GMLParams::GMLParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    require_alpha(alpha);
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must satisfy β > 0 (got " + std::to_string(beta) + ")");
    }
}

double ml_pdf(const MLParams& params, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("ml_pdf: t must satisfy t > 0");
    }
    const double alpha = params.alpha();
    const double delta = params.delta();
    const double scaled = t / delta;
    if (alpha == 1.0) {
        return std::exp(-scaled) / delta;
    }
    if (scaled <= kPdfSeriesLimit) {
        const double tau = -std::pow(scaled, alpha);
        return std::pow(t, alpha - 1.0) * std::pow(delta, -alpha)
               * special::mittag_leffler(alpha, alpha, tau);
    }
    return ml_pdf_mixture(alpha, delta, t);
}

double gml_cdf(const GMLParams& params, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("gml_cdf: x must satisfy x > 0");
    }
    const double alpha = params.alpha();
    const double beta = params.beta();
    const double log_x = std::log(x);
    const double log_gamma_beta = log_gamma(beta);

    double sum = 0.0;
    double carry = 0.0;
    double max_magnitude = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    int small_run = 0;
    // (beta)_k / k!, advanced by one factor per term while it stays finite
    double rising_ratio = 1.0;
    for (int k = 0; k < special::kSeriesTermBudget; ++k) {
        const double kb = k + beta;
        if (k > 0) {
            rising_ratio *= (kb - 1.0) / k;
        }
        // Direct products keep each term within a few ulps; the log form,
        // whose error grows with the size of the exponent, is the fallback.
        double magnitude = 0.0;
        const double g = 1.0 + alpha * kb;
        if (g < 170.0 && std::isfinite(rising_ratio)) {
            magnitude = rising_ratio * std::pow(x, alpha * kb) / std::tgamma(g);
        }
        if (!(std::isfinite(magnitude) && magnitude > 0.0)) {
            magnitude = std::exp(log_gamma(kb) - log_gamma_beta - log_gamma(k + 1.0)
                                 + alpha * kb * log_x - log_gamma(g));
        }
        max_magnitude = std::max(max_magnitude, magnitude);
        if (max_magnitude * std::numeric_limits<double>::epsilon() > kGmlCdfCancellationLimit) {
            throw ConvergenceError("gml_cdf: x = " + std::to_string(x)
                                   + " is outside the practical convergence region of the series");
        }
        const double term = (k % 2 == 1) ? -magnitude : magnitude;
        const double s = sum + term;
        carry += (std::abs(sum) >= std::abs(term)) ? (sum - s) + term : (term - s) + sum;
        sum = s;

        const bool decreasing = magnitude <= previous;
        previous = magnitude;
        if (decreasing && magnitude < 1e-16 * std::abs(sum + carry)) {
            if (++small_run == 2) {
                const double value = sum + carry;
                return std::min(1.0, std::max(0.0, value));
            }
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("gml_cdf: series did not converge within the term budget");
}

double ml_fractional_moment(const MLParams& params, double q) {
    const double alpha = params.alpha();
    if (!(q > 0.0 && q < alpha)) {
        throw DomainError("q must satisfy 0 < q < α (moments are infinite for q ≥ α)");
    }
    // q pi delta^q / (alpha Gamma(1-q) sin(pi q / alpha))
    return q * pi * std::pow(params.delta(), q)
           / (alpha * std::exp(log_gamma(1.0 - q)) * std::sin(pi * q / alpha));
}

double gml_fractional_moment(const GMLParams& params, double q) {
    const double alpha = params.alpha();
    const double beta = params.beta();
    if (!(q > -alpha * beta && q < alpha)) {
        throw DomainError("q must satisfy -αβ < q < α");
    }
    if (q == 0.0) {
        return 1.0;
    }
    const double r = q / alpha;
    return std::exp(log_gamma(1.0 - r) + log_gamma(beta + r) - log_gamma(1.0 - q)
                    - log_gamma(beta));
}

LogMomentSet ml_log_moments(const MLParams& params) {
    const double alpha = params.alpha();
    const double a2 = alpha * alpha;
    const double a4 = a2 * a2;
    const double pi4 = pi * pi * pi * pi;
    return LogMomentSet{
        .mean = std::log(params.delta()) - euler_gamma,
        .variance = kPi2Over6 * (2.0 / a2 - 1.0),
        .third_central = -2.0 * zeta3,
        .fourth_central = pi4 * (a4 - 20.0 * a2 + 28.0) / (60.0 * a4),
    };
}

double gml_log_cumulant(const GMLParams& params, int k) {
    if (k < 1 || k > 4) {
        throw DomainError("gml_log_cumulant: k must be in 1..4");
    }
    const double alpha = params.alpha();
    const double at_beta = special::polygamma(k - 1, params.beta());
    // psi^(k-1)(1): -gamma, pi^2/6, -2 zeta(3), pi^4/15
    double at_one = 0.0;
    switch (k) {
    case 1: at_one = -euler_gamma; break;
    case 2: at_one = kPi2Over6; break;
    case 3: at_one = -2.0 * zeta3; break;
    default: at_one = pi * pi * pi * pi / 15.0; break;
    }
    const double ak = std::pow(alpha, k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return (at_beta + sign * at_one * (1.0 - ak)) / ak;
}

double gml_log_mean(const GMLParams& params, PsiMode mode) {
    const double alpha = params.alpha();
    return euler_gamma * (1.0 / alpha - 1.0) + special::digamma(params.beta(), mode) / alpha;
}

double gml_log_variance(const GMLParams& params, PsiMode mode) {
    const double a2 = params.alpha() * params.alpha();
    return kPi2Over6 * (1.0 / a2 - 1.0) + special::trigamma(params.beta(), mode) / a2;
}

double gml_log_third_moment(const GMLParams& params) {
    const double a = params.alpha();
    const double beta = params.beta();
    const double g = euler_gamma;
    const double psi = special::polygamma(0, beta);
    const double psi1 = special::polygamma(1, beta);
    const double psi2 = special::polygamma(2, beta);
    const double inv = 1.0 / a - 1.0;
    const double a3 = a * a * a;

    // 3 E(S'^2) E(W'/a)
    const double cross_s2 = 3.0 * (inv * inv * g * g + kPi2Over6 * (1.0 / (a * a) - 1.0)) * psi / a;
    // 3 E(S') E(W'/a)^2
    const double cross_s1 = 3.0 * inv * g * (psi * psi + psi1) / (a * a);
    // E(W'/a)^3
    const double w3 = (psi * psi * psi + 3.0 * psi * psi1 + psi2) / a3;
    // E(S'^3) for the one-sided stable factor
    const double am1 = a - 1.0;
    const double s3 = (-2.0 * am1 * am1 * am1 * g * g * g + g * pi * pi * am1 * am1 * (1.0 + a)
                       - 4.0 * (a3 - 1.0) * zeta3)
                      / (2.0 * a3);
    return cross_s2 + cross_s1 + w3 + s3;
}

} // namespace mlefit
