#pragma once

#include "mlefit/solvers.hpp"
#include "mlefit/special_fn.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mlefit {

enum class Method { LogMoment, FractionalMoment };

std::string_view to_string(Method method) noexcept;

/// Divisor of the log-data sample variance. N is the 1/n moment estimator;
/// NMinusOne is the unbiased form computed by R's var().
enum class VarianceDivisor { N, NMinusOne };

/// Positive data together with their logarithms, validated once and shared by
/// every estimator applied to the same sample.
class LogSample {
public:
    /// Throws DomainError naming the first non-positive (or non-finite) datum
    /// by its zero-based index, or if fewer than two values are given.
    explicit LogSample(std::span<const double> data);

    std::span<const double> logs() const noexcept { return logs_; }
    std::size_t size() const noexcept { return logs_.size(); }

private:
    std::vector<double> logs_;
};

struct LogSummary {
    std::size_t n;
    double mean;
    double variance;
};

LogSummary log_summary(const LogSample& sample, VarianceDivisor divisor = VarianceDivisor::N);
LogSummary log_summary(std::span<const double> data, VarianceDivisor divisor = VarianceDivisor::N);

struct FitResult {
    double param1;      // alpha estimate, clamped to 1 when the raw value exceeds 1
    double param2;      // delta (ML) or beta (GML)
    Method method;
    bool clamped;
    int solver_iterations;
    bool converged;
    double raw_param1;  // unclamped alpha estimate
};

struct ConfidenceInterval {
    double lower;
    double upper;
    double level;
};

struct MLConfidenceIntervals {
    ConfidenceInterval alpha;
    ConfidenceInterval delta;
};

/// Closed-form log-moment fit of ML(alpha, delta):
/// alpha = 2 pi / sqrt(2 (6 s^2 + pi^2)), delta = exp(m + gamma).
/// The raw alpha lies in (0, sqrt 2].
FitResult estimate_ml_logmoment(const LogSummary& summary);

/// Search interval for the fractional-moment alpha equation. The ratio
/// function has a pole at 0.5 and decreases to 1 at ~1.1779, while the
/// sample ratio e(1/2)/e(1/4)^2 is at least 1, so a sign change is guaranteed.
inline constexpr double kFractionalAlphaLower = 0.5 + 1e-9;
inline constexpr double kFractionalAlphaUpper = 1.2;

/// Fractional-moment fit of ML(alpha, delta) with q = 1/2 and q = 1/4, from
/// the sample moments e(1/2) and e(1/4).
FitResult estimate_ml_fractional(double e_half, double e_quarter,
                                 const SolverConfig& config = {});
FitResult estimate_ml_fractional(const LogSample& sample, const SolverConfig& config = {});
FitResult estimate_ml_fractional(std::span<const double> data, const SolverConfig& config = {});

/// Root tolerance on beta for the GML log-moment solve. Tighter than the
/// 1e-6 used elsewhere: at small beta, psi1 is steep and a 1e-6 error in beta
/// moves alpha by ~1e-5.
inline constexpr SolverConfig kGmlLogMomentSolver{1e-10, 200};

/// Log-moment fit of GML(alpha, beta). Eliminates alpha through the variance
/// equation, alpha^2 = (pi^2/6 + psi1(beta)) / (s^2 + pi^2/6), and solves
/// the mean equation for beta with Brent's method after scanning
/// [1e-3, 1e3] (widened up to [1e-8, 1e8]) for a sign change.
FitResult estimate_gml_logmoment(const LogSummary& summary, PsiMode mode = PsiMode::Accurate,
                                 const SolverConfig& config = kGmlLogMomentSolver);

struct GmlFractionalOptions {
    double q1 = 1.0 / 3.0;
    double q2 = 1.0 / 4.0;
    SolverConfig solver{1e-6, 1000};
};

/// Fractional-moment fit of GML(alpha, beta): minimizes the squared
/// differences between log sample moments and log E X^q at q1, q2 over
/// alpha in [0.26, 1], beta in [1e-3, 1e3] (searched in log beta).
/// Non-convergence is reported through FitResult::converged.
FitResult estimate_gml_fractional(double e_q1, double e_q2, const GmlFractionalOptions& options = {});
FitResult estimate_gml_fractional(const LogSample& sample, const GmlFractionalOptions& options = {});
FitResult estimate_gml_fractional(std::span<const double> data, const GmlFractionalOptions& options = {});

/// Objective minimized by estimate_gml_fractional, exposed for testing.
double gml_fractional_objective(double alpha, double beta, double e_q1, double e_q2, double q1,
                                double q2);

/// Large-sample intervals for an ML fit:
/// alpha +- z sqrt(alpha^2 (32 - 20 alpha^2 - alpha^4) / (40 n)),
/// delta +- z sqrt(pi^2 delta^2 (2/alpha^2 - 1) / (6 n)).
MLConfidenceIntervals ml_confidence_intervals(const FitResult& fit, std::size_t n, double level);

} // namespace mlefit
