#pragma once

#include "mlefit/special_fn.hpp"

namespace mlefit {

/// Parameters of the Mittag-Leffler law ML(alpha, delta): Laplace transform
/// 1 / (1 + (delta s)^alpha). delta is a scale in data units.
class MLParams {
public:
    /// Throws DomainError unless 0 < alpha <= 1 and delta > 0.
    MLParams(double alpha, double delta);

    double alpha() const noexcept { return alpha_; }
    double delta() const noexcept { return delta_; }

private:
    double alpha_;
    double delta_;
};

/// Parameters of the generalized Mittag-Leffler law GML(alpha, beta):
/// Laplace transform (1 + s^alpha)^(-beta).
class GMLParams {
public:
    /// Throws DomainError unless 0 < alpha <= 1 and beta > 0.
    GMLParams(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

private:
    double alpha_;
    double beta_;
};

/// Mean, variance and third/fourth central moments of log T.
struct LogMomentSet {
    double mean;
    double variance;
    double third_central;
    double fourth_central;
};

/// Density of ML(alpha, delta) at t > 0.
///
/// For t/delta <= kPdfSeriesLimit the Mittag-Leffler series form
/// t^(alpha-1) delta^(-alpha) E_{alpha,alpha}(-(t/delta)^alpha) is used.
/// Beyond it the alternating series loses digits, so the mixture integral
/// (1/t) int_0^inf exp(-xi) g(t/(delta xi)) dxi is evaluated instead.
/// alpha = 1 is the exponential density in closed form. As t -> 0 with
/// alpha < 1 the value diverges like t^(alpha-1) and is returned unclamped.
double ml_pdf(const MLParams& params, double t);

inline constexpr double kPdfSeriesLimit = 4.0;

/// CDF of GML(alpha, beta) via its alternating power series in x^alpha.
///
/// The series converges for every x, but its terms first grow to a maximum
/// before decaying, and cancellation limits the accuracy to about
/// 2.2e-16 * max_k |term_k|. Points where that bound exceeds
/// kGmlCdfCancellationLimit are rejected with ConvergenceError. In practice
/// this allows x up to ~17 for (1, 1), ~12 for (1, 5) and ~7 for (0.5, 1).
double gml_cdf(const GMLParams& params, double x);

inline constexpr double kGmlCdfCancellationLimit = 1e-8;

/// E T^q for 0 < q < alpha.
double ml_fractional_moment(const MLParams& params, double q);

/// E X^q for -alpha beta < q < alpha; q == 0 returns exactly 1.
double gml_fractional_moment(const GMLParams& params, double q);

LogMomentSet ml_log_moments(const MLParams& params);

/// k-th cumulant d_k of log X, k in 1..4.
double gml_log_cumulant(const GMLParams& params, int k);

/// Mean of log X written as gamma (1/alpha - 1) + psi(beta)/alpha.
double gml_log_mean(const GMLParams& params, PsiMode mode = PsiMode::Accurate);

/// Variance of log X written as (pi^2/6)(1/alpha^2 - 1) + psi1(beta)/alpha^2.
double gml_log_variance(const GMLParams& params, PsiMode mode = PsiMode::Accurate);

/// Non-central E (log X)^3.
double gml_log_third_moment(const GMLParams& params);

} // namespace mlefit
