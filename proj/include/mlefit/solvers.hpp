#pragma once

#include <array>
#include <functional>

namespace mlefit {

struct SolverConfig {
    double tolerance = 1e-6;
    int max_iterations = 200;

    /// Throws DomainError unless tolerance > 0 and max_iterations >= 1.
    void validate() const;
};

struct RootResult {
    double root;
    int iterations;
};

/// Brent's method on [lo, hi]: inverse quadratic / secant steps guarded by
/// bisection. Stops when the bracket half-width falls below
/// 2 eps |b| + tolerance / 2 or f hits zero exactly.
///
/// Throws NoRootError if f(lo) and f(hi) have the same strict sign, and
/// ConvergenceError if the iteration budget runs out.
RootResult find_root(const std::function<double(double)>& f, double lo, double hi,
                     const SolverConfig& config = {});

using Point2 = std::array<double, 2>;

struct Box2 {
    Point2 lower;
    Point2 upper;
};

struct MinimizeResult {
    Point2 point;
    double value;
    bool converged;
    int iterations;
};

/// Nelder-Mead simplex descent in two dimensions. Trial points are projected
/// coordinate-wise onto the box, so the returned point always lies inside it.
/// Non-finite objective values are treated as +inf. Converged once the
/// simplex diameter (largest vertex distance from the best vertex) drops below
/// config.tolerance. If the budget runs out, the simplex is rebuilt around the
/// best vertex once and descent continues for another budget; if that also
/// fails, converged = false is returned rather than thrown.
MinimizeResult minimize_2d(const std::function<double(double, double)>& f, Point2 start,
                           const Box2& box, const SolverConfig& config = {});

} // namespace mlefit
