#include "mlefit/sampling.hpp"

#include "mlefit/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace mlefit {

using special::pi;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t cell, std::uint64_t replicate) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ cell);
    h = splitmix64(h ^ (replicate + 0x632be59bd9b4e019ULL));
    std::array<std::uint32_t, 8> words{};
    for (std::size_t i = 0; i < words.size(); i += 2) {
        h = splitmix64(h);
        words[i] = static_cast<std::uint32_t>(h);
        words[i + 1] = static_cast<std::uint32_t>(h >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

void require_open_alpha(double alpha, const char* what) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError(std::string(what) + ": alpha must satisfy 0 < α < 1");
    }
}

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t cell_id, std::uint64_t replicate_id)
    : engine_(make_engine(master_seed, cell_id, replicate_id)),
      cell_id_(cell_id),
      replicate_id_(replicate_id) {}

RngStream RngStream::from_entropy() {
    std::random_device device;
    const std::uint64_t seed = (static_cast<std::uint64_t>(device()) << 32) | device();
    return RngStream(seed);
}

double exponential_from_uniform(double u) { return -std::log1p(-u); }

double r_from_uniform(double alpha, double u) {
    const double theta = alpha * pi;
    return std::sin(theta * u) / std::sin(theta * (1.0 - u));
}

double sample_exp(RngStream& rng) { return exponential_from_uniform(rng.uniform()); }

double sample_normal(RngStream& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

double sample_gamma(RngStream& rng, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("sample_gamma: beta must satisfy β > 0");
    }
    if (beta < 1.0) {
        const double boosted = sample_gamma(rng, beta + 1.0);
        return boosted * std::exp(std::log(rng.uniform()) / beta);
    }
    const double d = beta - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = sample_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double sample_positive_stable(RngStream& rng, double alpha) {
    if (alpha == 1.0) {
        return 1.0;
    }
    require_open_alpha(alpha, "sample_positive_stable");
    const double u = pi * rng.uniform();
    const double e = sample_exp(rng);
    // S = sin(a u) / sin(u)^(1/a) * (sin((1-a) u) / E)^((1-a)/a)
    const double log_s = std::log(std::sin(alpha * u)) - std::log(std::sin(u)) / alpha
                         + (1.0 - alpha) / alpha * (std::log(std::sin((1.0 - alpha) * u)) - std::log(e));
    return std::exp(log_s);
}

double sample_r(RngStream& rng, double alpha) {
    require_open_alpha(alpha, "sample_r");
    return r_from_uniform(alpha, rng.uniform());
}

double sample_ml(RngStream& rng, const MLParams& params) {
    const double z = sample_exp(rng);
    if (params.alpha() == 1.0) {
        return params.delta() * z;
    }
    const double r = r_from_uniform(params.alpha(), rng.uniform());
    return params.delta() * z * std::pow(r, 1.0 / params.alpha());
}

double sample_gml(RngStream& rng, const GMLParams& params) {
    const double w = sample_gamma(rng, params.beta());
    if (params.alpha() == 1.0) {
        return w;
    }
    return std::pow(w, 1.0 / params.alpha()) * sample_positive_stable(rng, params.alpha());
}

void sample_ml(RngStream& rng, const MLParams& params, std::span<double> out) {
    for (double& x : out) {
        x = sample_ml(rng, params);
    }
}

void sample_gml(RngStream& rng, const GMLParams& params, std::span<double> out) {
    for (double& x : out) {
        x = sample_gml(rng, params);
    }
}

} // namespace mlefit
