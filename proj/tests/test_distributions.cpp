#include "mlefit/distributions.hpp"
#include "mlefit/errors.hpp"
#include "mlefit/special_fn.hpp"
#include "oracles.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <doctest.h>

#include <cmath>
#include <string>

using namespace mlefit;
using mlefit::special::euler_gamma;
using mlefit::special::pi;
using mlefit::special::zeta3;

namespace {

// k-th cumulant of log S for the one-sided stable law with E S^q =
// Gamma(1 - q/a) / Gamma(1 - q): ((-1/a)^k - (-1)^k) psi^(k-1)(1).
double stable_log_cumulant(double a, int k) {
    const double at_one = boost::math::polygamma(k - 1, 1.0);
    return (std::pow(-1.0 / a, k) - std::pow(-1.0, k)) * at_one;
}

// cumulants of log T for ML: log T = log delta + log Z + log S + (1/a) log W
// collapses to E T^q = delta^q Gamma(1 + q/a) Gamma(1 - q/a) / Gamma(1 - q)
double ml_log_cumulant(double a, double delta, int k) {
    const double at_one = boost::math::polygamma(k - 1, 1.0);
    const double value = (std::pow(1.0 / a, k) + std::pow(-1.0 / a, k) - std::pow(-1.0, k)) * at_one;
    return k == 1 ? value + std::log(delta) : value;
}

double gml_log_cumulant_oracle(double a, double beta, int k) {
    return boost::math::polygamma(k - 1, beta) / std::pow(a, k) + stable_log_cumulant(a, k);
}

double ml_pdf_oracle(double alpha, double delta, double t) {
    const double s = t / delta;
    return std::pow(s, alpha - 1.0) / delta
           * oracle::mittag_leffler(alpha, alpha, -std::pow(s, alpha)).value;
}

} // namespace

TEST_CASE("parameter validation names the constraint") {
    CHECK_NOTHROW(MLParams(1.0, 1.0));
    CHECK_NOTHROW(GMLParams(0.01, 0.001));
    for (double alpha : {0.0, -0.1, 1.5, std::nan("")}) {
        try {
            MLParams p(alpha, 1.0);
            FAIL("expected DomainError for alpha = " << alpha);
        } catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("0 < α ≤ 1") != std::string::npos);
        }
    }
    CHECK_THROWS_WITH_AS(MLParams(0.5, 0.0), doctest::Contains("δ > 0"), DomainError);
    CHECK_THROWS_WITH_AS(GMLParams(0.5, -1.0), doctest::Contains("β > 0"), DomainError);
    CHECK_THROWS_AS(GMLParams(0.5, INFINITY), DomainError);
    const MLParams p(0.7, 2.5);
    CHECK(p.alpha() == 0.7);
    CHECK(p.delta() == 2.5);
}

TEST_CASE("ml_pdf at alpha = 1 is the exponential density") {
    for (double t : {0.01, 0.5, 2.0, 30.0}) {
        CHECK(ml_pdf(MLParams(1.0, 2.0), t) == doctest::Approx(std::exp(-t / 2.0) / 2.0).epsilon(1e-15));
    }
}

TEST_CASE("ml_pdf matches the 50-digit series on both sides of the switch point") {
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
        for (double delta : {0.5, 1.0, 3.0}) {
            for (double s : {0.05, 0.7, 2.0, 3.99, 4.01, 6.0, 12.0, 25.0}) {
                const double t = s * delta;
                INFO("alpha=" << alpha << " delta=" << delta << " t=" << t);
                const double want = ml_pdf_oracle(alpha, delta, t);
                CHECK(ml_pdf(MLParams(alpha, delta), t) == doctest::Approx(want).epsilon(1e-9));
            }
        }
    }
    // frozen value from the oracle: f(1) for ML(0.5, 1)
    CHECK(ml_pdf(MLParams(0.5, 1.0), 1.0) == doctest::Approx(ml_pdf_oracle(0.5, 1.0, 1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(ml_pdf(MLParams(0.5, 1.0), 0.0), DomainError);
    CHECK_THROWS_AS(ml_pdf(MLParams(0.5, 1.0), -1.0), DomainError);
}

TEST_CASE("ml_pdf integrates to one") {
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double alpha : {0.6, 0.8, 0.95}) {
        const MLParams p(alpha, 1.5);
        const double total = integrator.integrate([&](double t) { return ml_pdf(p, t); }, 1e-10);
        INFO("alpha = " << alpha);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("gml_cdf against the exponential, gamma and ML special cases") {
    // alpha = 1: GML(1, beta) is Gamma(beta, 1)
    for (double beta : {0.5, 1.0, 2.5, 5.0}) {
        for (double x : {0.05, 0.5, 1.0, 3.0, 8.0}) {
            INFO("beta=" << beta << " x=" << x);
            CHECK(gml_cdf(GMLParams(1.0, beta), x) == doctest::Approx(boost::math::gamma_p(beta, x)).epsilon(1e-10));
        }
    }
    // beta = 1: GML(alpha, 1) is ML(alpha, 1), F(x) = 1 - E_alpha(-x^alpha)
    for (double alpha : {0.5, 0.7, 0.9}) {
        for (double x : {0.01, 0.3, 1.0, 2.5}) {
            INFO("alpha=" << alpha << " x=" << x);
            const double want = 1.0 - oracle::mittag_leffler(alpha, 1.0, -std::pow(x, alpha)).value;
            CHECK(gml_cdf(GMLParams(alpha, 1.0), x) == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("gml_cdf is monotone and bounded, and refuses unstable arguments") {
    const GMLParams p(0.6, 3.0);
    double previous = 0.0;
    for (double x = 0.01; x < 4.0; x += 0.05) {
        const double f = gml_cdf(p, x);
        CHECK(f >= previous);
        CHECK(f <= 1.0);
        previous = f;
    }
    CHECK_THROWS_AS(gml_cdf(GMLParams(0.5, 1.0), 50.0), ConvergenceError);
    CHECK_THROWS_AS(gml_cdf(p, 0.0), DomainError);
}

TEST_CASE("fractional moments") {
    // ML(1, delta) is exponential with mean delta: E T^q = delta^q Gamma(1 + q)
    CHECK(ml_fractional_moment(MLParams(1.0, 2.0), 0.5) == doctest::Approx(std::sqrt(2.0) * std::tgamma(1.5)).epsilon(1e-14));
    for (double alpha : {0.4, 0.7, 0.95}) {
        for (double frac : {0.1, 0.5, 0.9}) {
            const double q = frac * alpha;
            const double delta = 1.7;
            const double want = std::pow(delta, q) * std::tgamma(1 + q / alpha) * std::tgamma(1 - q / alpha)
                                / std::tgamma(1 - q);
            INFO("alpha=" << alpha << " q=" << q);
            CHECK(ml_fractional_moment(MLParams(alpha, delta), q) == doctest::Approx(want).epsilon(1e-13));
        }
    }
    // against quadrature of t^q f(t)
    {
        const MLParams p(0.8, 1.3);
        boost::math::quadrature::exp_sinh<double> integrator;
        const double q = 0.3;
        const double integral = integrator.integrate([&](double t) { return std::pow(t, q) * ml_pdf(p, t); }, 1e-10);
        CHECK(ml_fractional_moment(p, q) == doctest::Approx(integral).epsilon(1e-6));
    }
    // GML(1, beta) is Gamma(beta): E X^q = Gamma(beta + q) / Gamma(beta)
    for (double q : {-1.5, -0.3, 0.25, 0.9}) {
        CHECK(gml_fractional_moment(GMLParams(1.0, 2.0), q) == doctest::Approx(std::tgamma(2.0 + q) / std::tgamma(2.0)).epsilon(1e-13));
    }
    // GML(alpha, 1) coincides with ML(alpha, 1)
    CHECK(gml_fractional_moment(GMLParams(0.6, 1.0), 0.3) == doctest::Approx(ml_fractional_moment(MLParams(0.6, 1.0), 0.3)).epsilon(1e-13));
    CHECK(gml_fractional_moment(GMLParams(0.6, 2.0), 0.0) == 1.0);

    CHECK_THROWS_WITH_AS(ml_fractional_moment(MLParams(0.5, 1.0), 0.6), doctest::Contains("0 < q < α"), DomainError);
    CHECK_THROWS_AS(ml_fractional_moment(MLParams(0.5, 1.0), 0.5), DomainError);
    CHECK_THROWS_AS(ml_fractional_moment(MLParams(0.5, 1.0), 0.0), DomainError);
    CHECK_THROWS_AS(gml_fractional_moment(GMLParams(0.5, 2.0), -1.0), DomainError);
    CHECK_THROWS_AS(gml_fractional_moment(GMLParams(0.5, 2.0), 0.5), DomainError);
}

TEST_CASE("ML log moments") {
    const LogMomentSet m = ml_log_moments(MLParams(0.5, 1.0));
    CHECK(m.mean == doctest::Approx(-euler_gamma).epsilon(1e-15));
    CHECK(m.variance == doctest::Approx(11.514538467937).epsilon(1e-12));
    for (double alpha : {0.3, 0.5, 0.77, 1.0}) {
        for (double delta : {0.1, 1.0, 42.0}) {
            const LogMomentSet s = ml_log_moments(MLParams(alpha, delta));
            const double k2 = ml_log_cumulant(alpha, delta, 2);
            INFO("alpha=" << alpha << " delta=" << delta);
            CHECK(s.mean == doctest::Approx(ml_log_cumulant(alpha, delta, 1)).epsilon(1e-13));
            CHECK(s.variance == doctest::Approx(k2).epsilon(1e-13));
            CHECK(s.third_central == doctest::Approx(ml_log_cumulant(alpha, delta, 3)).epsilon(1e-13));
            CHECK(s.fourth_central == doctest::Approx(ml_log_cumulant(alpha, delta, 4) + 3 * k2 * k2).epsilon(1e-13));
        }
    }
    // alpha = 1: log of an exponential has variance pi^2/6 and third cumulant -2 zeta(3)
    const LogMomentSet e = ml_log_moments(MLParams(1.0, 1.0));
    CHECK(e.variance == doctest::Approx(pi * pi / 6).epsilon(1e-15));
    CHECK(e.third_central == doctest::Approx(-2 * zeta3).epsilon(1e-15));
}

TEST_CASE("GML log cumulants and moments") {
    for (double alpha : {0.3, 0.6, 0.9, 1.0}) {
        for (double beta : {0.2, 1.0, 4.0, 20.0}) {
            const GMLParams p(alpha, beta);
            INFO("alpha=" << alpha << " beta=" << beta);
            for (int k = 1; k <= 4; ++k) {
                CHECK(gml_log_cumulant(p, k) == doctest::Approx(gml_log_cumulant_oracle(alpha, beta, k)).epsilon(1e-12));
            }
            const double k1 = gml_log_cumulant_oracle(alpha, beta, 1);
            const double k2 = gml_log_cumulant_oracle(alpha, beta, 2);
            const double k3 = gml_log_cumulant_oracle(alpha, beta, 3);
            CHECK(gml_log_mean(p) == doctest::Approx(k1).epsilon(1e-12));
            CHECK(gml_log_variance(p) == doctest::Approx(k2).epsilon(1e-12));
            CHECK(gml_log_third_moment(p) == doctest::Approx(k3 + 3 * k2 * k1 + k1 * k1 * k1).epsilon(1e-11));
        }
    }
    // GML(alpha, 1) and ML(alpha, 1) share their log moments
    const LogMomentSet m = ml_log_moments(MLParams(0.7, 1.0));
    CHECK(gml_log_mean(GMLParams(0.7, 1.0)) == doctest::Approx(m.mean).epsilon(1e-14));
    CHECK(gml_log_variance(GMLParams(0.7, 1.0)) == doctest::Approx(m.variance).epsilon(1e-14));
    // the truncated psi mode differs visibly only at small beta
    CHECK(gml_log_mean(GMLParams(0.7, 30.0), PsiMode::PaperTruncated) == doctest::Approx(gml_log_mean(GMLParams(0.7, 30.0))).epsilon(1e-14));
    CHECK(std::abs(gml_log_mean(GMLParams(0.7, 0.3), PsiMode::PaperTruncated) - gml_log_mean(GMLParams(0.7, 0.3))) > 0.01);
    CHECK_THROWS_AS(gml_log_cumulant(GMLParams(0.7, 1.0), 5), DomainError);
}
