#pragma once

#include "mlefit/distributions.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace mlefit {

/// Deterministic random stream addressed by (master seed, cell, replicate).
///
/// The three coordinates are hashed with SplitMix64 into the seed sequence of
/// a 64-bit Mersenne Twister, so every (seed, cell, replicate) triple owns an
/// independent reproducible sequence. Uniforms are built from raw engine bits
/// rather than std::uniform_real_distribution, whose output is
/// implementation-defined. A stream is single-owner; move it between threads
/// but never share it.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t cell_id = 0,
                       std::uint64_t replicate_id = 0);

    /// Stream seeded from std::random_device, for non-reproducible use.
    static RngStream from_entropy();

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1): (k + 1/2) 2^-52 for k < 2^52.
    double uniform() {
        return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
    }

    std::uint64_t cell_id() const noexcept { return cell_id_; }
    std::uint64_t replicate_id() const noexcept { return replicate_id_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t cell_id_;
    std::uint64_t replicate_id_;
};

/// Inverse CDF of the standard exponential, -log(1 - u).
double exponential_from_uniform(double u);

/// Inverse CDF of the R-law with density
/// sin(pi a) / (a pi (r^2 + 2 r cos(pi a) + 1)), written as
/// sin(a pi u) / sin(a pi (1 - u)).
double r_from_uniform(double alpha, double u);

double sample_exp(RngStream& rng);

/// Standard normal (Box-Muller, cosine branch only).
double sample_normal(RngStream& rng);

/// Gamma(shape beta, scale 1). Marsaglia-Tsang squeeze for beta >= 1,
/// gamma(beta + 1) U^(1/beta) below.
double sample_gamma(RngStream& rng, double beta);

/// One-sided stable law with Laplace transform exp(-s^alpha), via Kanter's
/// representation. alpha == 1 is the point mass at 1.
double sample_positive_stable(RngStream& rng, double alpha);

double sample_r(RngStream& rng, double alpha);

/// T = delta Z R^(1/alpha).
double sample_ml(RngStream& rng, const MLParams& params);

/// X = W^(1/alpha) S_alpha.
double sample_gml(RngStream& rng, const GMLParams& params);

void sample_ml(RngStream& rng, const MLParams& params, std::span<double> out);
void sample_gml(RngStream& rng, const GMLParams& params, std::span<double> out);

} // namespace mlefit
