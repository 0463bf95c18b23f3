#pragma once

// Special functions used throughout the library: the two-parameter
// Mittag-Leffler function, log-gamma, the digamma/trigamma pair (with both a
// high-accuracy evaluation and the short five-term truncation used by the
// GML log-moment estimator), low-order polygammas and a standard normal
// quantile. Everything here is a pure function.

namespace mlefit {

enum class PsiMode {
    Accurate,       // recurrence shift + asymptotic series, ~1e-13 relative
    PaperTruncated  // five-term asymptotic truncation at the raw argument
};

namespace special {

inline constexpr double euler_gamma = 0.5772156649015328606065;
inline constexpr double zeta3 = 1.2020569031595942853997;
inline constexpr double pi = 3.141592653589793238462643383279502884;

struct Constants {
    double euler_gamma;
    double zeta3;
};

constexpr Constants constants() noexcept { return {special::euler_gamma, special::zeta3}; }

/// Largest accepted |tau|^(1/alpha) for mittag_leffler. Above it the series
/// value (which grows like exp(|tau|^(1/alpha))) overflows a double.
inline constexpr double kMittagLefflerGuard = 700.0;

/// Negative arguments are rejected with ConvergenceError once
/// eps * max_k |term_k| exceeds this multiple of max(1, |result|).
inline constexpr double kMittagLefflerCancellationLimit = 1e-8;

/// Term budget for the Mittag-Leffler and GML-CDF series.
inline constexpr int kSeriesTermBudget = 10000;

/// E_{alpha,nu}(tau) = sum_k tau^k / Gamma(nu + k alpha).
///
/// Summed with Neumaier compensation. Stops once two consecutive terms are
/// both below 1e-16 |partial sum| and the term magnitudes have started to
/// decrease. For tau < 0 the terms alternate and the achievable accuracy is
/// roughly 1e-16 * max_k |term_k|, so negative arguments with
/// |tau|^(1/alpha) beyond ~10 lose digits; ml_pdf switches to an integral
/// representation well before that point.
///
/// Throws DomainError if alpha is outside (0,1], nu <= 0, tau is not finite
/// or |tau|^(1/alpha) > kMittagLefflerGuard; ConvergenceError if the stopping
/// rule is not met within kSeriesTermBudget terms or the cancellation bound
/// exceeds kMittagLefflerCancellationLimit.
double mittag_leffler(double alpha, double nu, double tau);

/// log Gamma(tau) for tau > 0 (Lanczos, g = 607/128, 15 coefficients).
double log_gamma(double tau);

double digamma(double tau, PsiMode mode = PsiMode::Accurate);
double trigamma(double tau, PsiMode mode = PsiMode::Accurate);

/// psi^(order)(tau) for order in 0..3, high accuracy only.
double polygamma(int order, double tau);

/// Standard normal quantile Phi^{-1}(p), p in (0,1).
double normal_quantile(double p);

} // namespace special
} // namespace mlefit
