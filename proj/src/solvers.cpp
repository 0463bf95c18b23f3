#include "mlefit/solvers.hpp"

#include "mlefit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mlefit {

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }
    if (max_iterations < 1) {
        throw DomainError("solver max_iterations must be at least 1");
    }
}

RootResult find_root(const std::function<double(double)>& f, double lo, double hi,
                     const SolverConfig& config) {
    config.validate();
    double a = lo;
    double b = hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) {
        return {a, 0};
    }
    if (fb == 0.0) {
        return {b, 0};
    }
    if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0)) {
        throw NoRootError("find_root: no sign change on [" + std::to_string(lo) + ", "
                          + std::to_string(hi) + "]");
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * config.tolerance;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol1 || fb == 0.0) {
            return {b, iter};
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p = 0.0;
            double q = 0.0;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            }
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (m > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw ConvergenceError("find_root: iteration budget exhausted");
}

namespace {

struct Vertex {
    Point2 x;
    double fx;
};

Point2 project(Point2 p, const Box2& box) {
    for (int i = 0; i < 2; ++i) {
        p[i] = std::clamp(p[i], box.lower[i], box.upper[i]);
    }
    return p;
}

double safe_eval(const std::function<double(double, double)>& f, const Point2& p) {
    const double v = f(p[0], p[1]);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

double diameter(const std::array<Vertex, 3>& s) {
    double d = 0.0;
    for (int i = 1; i < 3; ++i) {
        d = std::max(d, std::hypot(s[i].x[0] - s[0].x[0], s[i].x[1] - s[0].x[1]));
    }
    return d;
}

std::array<Vertex, 3> initial_simplex(const std::function<double(double, double)>& f,
                                      const Point2& start, const Box2& box) {
    std::array<Vertex, 3> s;
    s[0] = {start, safe_eval(f, start)};
    for (int i = 0; i < 2; ++i) {
        const double width = box.upper[i] - box.lower[i];
        double step = 0.1 * width;
        if (std::isfinite(width) == false) {
            step = std::max(0.1 * std::abs(start[i]), 0.25);
        }
        Point2 p = start;
        p[i] += step;
        if (p[i] > box.upper[i]) {
            p[i] = start[i] - step;
        }
        p = project(p, box);
        s[i + 1] = {p, safe_eval(f, p)};
    }
    return s;
}

struct DescentOutcome {
    bool converged;
    int iterations;
};

DescentOutcome descend(const std::function<double(double, double)>& f, std::array<Vertex, 3>& s,
                       const Box2& box, const SolverConfig& config) {
    auto order = [&] {
        std::sort(s.begin(), s.end(), [](const Vertex& l, const Vertex& r) { return l.fx < r.fx; });
    };
    order();
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        if (diameter(s) < config.tolerance) {
            return {true, iter - 1};
        }
        const Point2 centroid = {0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
        auto along = [&](double t) {
            return project(Point2{centroid[0] + t * (s[2].x[0] - centroid[0]),
                                  centroid[1] + t * (s[2].x[1] - centroid[1])},
                           box);
        };
        const Point2 xr = along(-1.0);
        const double fr = safe_eval(f, xr);
        if (fr < s[0].fx) {
            const Point2 xe = along(-2.0);
            const double fe = safe_eval(f, xe);
            s[2] = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < s[1].fx) {
            s[2] = {xr, fr};
        } else {
            const bool outside = fr < s[2].fx;
            const Point2 xc = along(outside ? -0.5 : 0.5);
            const double fc = safe_eval(f, xc);
            if (fc < (outside ? fr : s[2].fx)) {
                s[2] = {xc, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    const Point2 p = {s[0].x[0] + 0.5 * (s[i].x[0] - s[0].x[0]),
                                      s[0].x[1] + 0.5 * (s[i].x[1] - s[0].x[1])};
                    s[i] = {p, safe_eval(f, p)};
                }
            }
        }
        order();
    }
    return {diameter(s) < config.tolerance, config.max_iterations};
}

} // namespace

MinimizeResult minimize_2d(const std::function<double(double, double)>& f, Point2 start,
                           const Box2& box, const SolverConfig& config) {
    config.validate();
    for (int i = 0; i < 2; ++i) {
        if (!(box.lower[i] < box.upper[i])) {
            throw DomainError("minimize_2d: box must be non-degenerate");
        }
    }
    start = project(start, box);
    if (!std::isfinite(f(start[0], start[1]))) {
        throw DomainError("minimize_2d: objective must be finite at the start point");
    }

    auto simplex = initial_simplex(f, start, box);
    DescentOutcome outcome = descend(f, simplex, box, config);
    int iterations = outcome.iterations;
    if (!outcome.converged) {
        simplex = initial_simplex(f, simplex[0].x, box);
        outcome = descend(f, simplex, box, config);
        iterations += outcome.iterations;
    }
    return {simplex[0].x, simplex[0].fx, outcome.converged, iterations};
}

} // namespace mlefit
