#include "mlefit/estimators.hpp"

#include "mlefit/errors.hpp"
#include "mlefit/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace mlefit {

using special::euler_gamma;
using special::log_gamma;
using special::pi;

namespace {

constexpr double kPi2Over6 = pi * pi / 6.0;

// Gamma(3/4)
const double kGamma34 = std::exp(special::log_gamma(0.75));

// Theoretical e(1/2) / e(1/4)^2 for ML(alpha, .); the scale cancels.
double ml_fractional_ratio(double alpha) {
    const double s4 = std::sin(pi / (4.0 * alpha));
    return kGamma34 * kGamma34 * 8.0 * alpha * s4 * s4
           / (std::pow(pi, 1.5) * std::sin(pi / (2.0 * alpha)));
}

double log_gml_moment(double alpha, double beta, double q) {
    const double r = q / alpha;
    return log_gamma(1.0 - r) + log_gamma(beta + r) - log_gamma(1.0 - q) - log_gamma(beta);
}

void require_positive_finite(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

void require_summary(const LogSummary& s) {
    if (s.n < 2) {
        throw DomainError("log summary needs n >= 2");
    }
    if (!(s.variance >= 0.0) || !std::isfinite(s.variance) || !std::isfinite(s.mean)) {
        throw DomainError("log summary needs a finite mean and a finite variance >= 0");
    }
}

std::array<double, 2> sample_fractional_moments(const LogSample& sample, double q1, double q2) {
    double s1 = 0.0;
    double s2 = 0.0;
    kernels::exp_sums(sample.logs(), q1, q2, s1, s2);
    const auto n = static_cast<double>(sample.size());
    return {s1 / n, s2 / n};
}

} // namespace

std::string_view to_string(Method method) noexcept {
    return method == Method::LogMoment ? "log" : "frac";
}

LogSample::LogSample(std::span<const double> data) {
    if (data.size() < 2) {
        throw DomainError("at least two observations are required");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!(data[i] > 0.0) || !std::isfinite(data[i])) {
            throw DomainError("datum " + std::to_string(i) + " must be positive and finite");
        }
    }
    logs_.resize(data.size());
    kernels::log_transform(data, logs_);
}

LogSummary log_summary(const LogSample& sample, VarianceDivisor divisor) {
    const std::size_t n = sample.size();
    const double mean = kernels::sum(sample.logs()) / static_cast<double>(n);
    const double ss = kernels::sum_sq_dev(sample.logs(), mean);
    const double denom = static_cast<double>(divisor == VarianceDivisor::N ? n : n - 1);
    return {n, mean, ss / denom};
}

LogSummary log_summary(std::span<const double> data, VarianceDivisor divisor) {
    return log_summary(LogSample(data), divisor);
}

FitResult estimate_ml_logmoment(const LogSummary& summary) {
    require_summary(summary);
    const double raw = 2.0 * pi / std::sqrt(2.0 * (6.0 * summary.variance + pi * pi));
    return FitResult{
        .param1 = std::min(raw, 1.0),
        .param2 = std::exp(summary.mean + euler_gamma),
        .method = Method::LogMoment,
        .clamped = raw > 1.0,
        .solver_iterations = 0,
        .converged = true,
        .raw_param1 = raw,
    };
}

FitResult estimate_ml_fractional(double e_half, double e_quarter, const SolverConfig& config) {
    require_positive_finite(e_half, "sample moment e(1/2)");
    require_positive_finite(e_quarter, "sample moment e(1/4)");
    const double ratio = e_half / (e_quarter * e_quarter);
    const RootResult root =
        find_root([ratio](double a) { return ml_fractional_ratio(a) - ratio; },
                  kFractionalAlphaLower, kFractionalAlphaUpper, config);
    const double a = root.root;

    // Average of the delta implied by e(1/2) and the one implied by e(1/4).
    const double s2 = std::sin(pi / (2.0 * a));
    const double s4 = std::sin(pi / (4.0 * a));
    const double from_half = 4.0 * a * a * s2 * s2 * (e_half * e_half) / pi;
    const double from_quarter = std::pow(4.0 * a * kGamma34 * s4 * e_quarter / pi, 4);
    const double delta = (from_half + from_quarter) / 2.0;

    return FitResult{
        .param1 = std::min(a, 1.0),
        .param2 = delta,
        .method = Method::FractionalMoment,
        .clamped = a > 1.0,
        .solver_iterations = root.iterations,
        .converged = true,
        .raw_param1 = a,
    };
}

FitResult estimate_ml_fractional(const LogSample& sample, const SolverConfig& config) {
    const auto moments = sample_fractional_moments(sample, 0.5, 0.25);
    return estimate_ml_fractional(moments[0], moments[1], config);
}

FitResult estimate_ml_fractional(std::span<const double> data, const SolverConfig& config) {
    return estimate_ml_fractional(LogSample(data), config);
}

FitResult estimate_gml_logmoment(const LogSummary& summary, PsiMode mode,
                                 const SolverConfig& config) {
    require_summary(summary);
    const double denom = summary.variance + kPi2Over6;
    if (!(denom > 0.0)) {
        throw DomainError("estimate_gml_logmoment: variance + pi^2/6 must be positive");
    }
    auto alpha_of = [&](double beta) {
        return std::sqrt((kPi2Over6 + special::trigamma(beta, mode)) / denom);
    };
    auto mean_residual = [&](double beta) {
        const double a = alpha_of(beta);
        return euler_gamma * (1.0 / a - 1.0) + special::digamma(beta, mode) / a - summary.mean;
    };

    // Scan a geometric grid (10 points per decade) for the first sign change,
    // widening the range decade by decade if [1e-3, 1e3] holds none.
    double lo = 1e-3;
    double hi = 1e3;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool found = false;
    for (int widen = 0; widen <= 5 && !found; ++widen) {
        const double step = std::pow(10.0, 0.1);
        double x0 = lo;
        double f0 = mean_residual(x0);
        for (double x1 = x0 * step; x1 <= hi * (1.0 + 1e-12); x1 *= step) {
            const double f1 = mean_residual(x1);
            if (std::isfinite(f0) && std::isfinite(f1) && (f0 <= 0.0) != (f1 <= 0.0)) {
                bracket_lo = x0;
                bracket_hi = x1;
                found = true;
                break;
            }
            x0 = x1;
            f0 = f1;
        }
        lo /= 10.0;
        hi *= 10.0;
    }
    if (!found) {
        throw NoRootError("estimate_gml_logmoment: no sign change of the profiled mean equation "
                          "for beta in [1e-8, 1e8]");
    }
    const RootResult root = find_root(mean_residual, bracket_lo, bracket_hi, config);
    const double beta = root.root;
    const double raw_alpha = alpha_of(beta);
    return FitResult{
        .param1 = std::min(raw_alpha, 1.0),
        .param2 = beta,
        .method = Method::LogMoment,
        .clamped = raw_alpha > 1.0,
        .solver_iterations = root.iterations,
        .converged = true,
        .raw_param1 = raw_alpha,
    };
}

double gml_fractional_objective(double alpha, double beta, double e_q1, double e_q2, double q1,
                                double q2) {
    if (!(alpha > q1 && alpha > q2 && alpha <= 1.0 && beta > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    const double r1 = std::log(e_q1) - log_gml_moment(alpha, beta, q1);
    const double r2 = std::log(e_q2) - log_gml_moment(alpha, beta, q2);
    return r1 * r1 + r2 * r2;
}

FitResult estimate_gml_fractional(double e_q1, double e_q2, const GmlFractionalOptions& options) {
    const double q1 = options.q1;
    const double q2 = options.q2;
    if (!(q1 > 0.0 && q1 < 1.0 && q2 > 0.0 && q2 < 1.0) || q1 == q2) {
        throw DomainError("fractional orders must be distinct and lie in (0, 1)");
    }
    require_positive_finite(e_q1, "sample moment e(q1)");
    require_positive_finite(e_q2, "sample moment e(q2)");

    const Box2 box{{0.26, std::log(1e-3)}, {1.0, std::log(1e3)}};
    auto objective = [&](double alpha, double log_beta) {
        return gml_fractional_objective(alpha, std::exp(log_beta), e_q1, e_q2, q1, q2);
    };
    MinimizeResult best = minimize_2d(objective, {0.75, std::log(2.0)}, box, options.solver);
    if (!best.converged) {
        const MinimizeResult retry =
            minimize_2d(objective, {0.5, std::log(10.0)}, box, options.solver);
        if (retry.converged || retry.value < best.value) {
            const int spent = best.iterations;
            best = retry;
            best.iterations += spent;
        }
    }
    return FitResult{
        .param1 = best.point[0],
        .param2 = std::exp(best.point[1]),
        .method = Method::FractionalMoment,
        .clamped = false,
        .solver_iterations = best.iterations,
        .converged = best.converged,
        .raw_param1 = best.point[0],
    };
}

FitResult estimate_gml_fractional(const LogSample& sample, const GmlFractionalOptions& options) {
    const auto moments = sample_fractional_moments(sample, options.q1, options.q2);
    return estimate_gml_fractional(moments[0], moments[1], options);
}

FitResult estimate_gml_fractional(std::span<const double> data, const GmlFractionalOptions& options) {
    return estimate_gml_fractional(LogSample(data), options);
}

MLConfidenceIntervals ml_confidence_intervals(const FitResult& fit, std::size_t n, double level) {
    if (n < 2) {
        throw DomainError("confidence intervals need n >= 2");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw DomainError("confidence level must satisfy 0 < level < 1");
    }
    const double a = fit.param1;
    if (!(a > 0.0 && a <= 1.0)) {
        throw DomainError("confidence intervals need 0 < alpha <= 1");
    }
    const double a2 = a * a;
    const double shape = 32.0 - 20.0 * a2 - a2 * a2;
    if (shape < 0.0) {
        throw DomainError("32 - 20 alpha^2 - alpha^4 must be non-negative");
    }
    const double z = special::normal_quantile(0.5 + 0.5 * level);
    const auto nd = static_cast<double>(n);
    const double half_alpha = z * std::sqrt(a2 * shape / (40.0 * nd));
    const double d = fit.param2;
    const double half_delta = z * std::sqrt(pi * pi * d * d * (2.0 / a2 - 1.0) / (6.0 * nd));
    return {
        {a - half_alpha, a + half_alpha, level},
        {d - half_delta, d + half_delta, level},
    };
}

} // namespace mlefit
