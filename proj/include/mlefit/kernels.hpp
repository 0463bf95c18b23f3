#pragma once

// Data-parallel reductions over samples. Every kernel has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant selected at runtime.
// The two agree to a few ulps per element (the AVX2 log/exp are fdlibm-style
// polynomial evaluations) and sum in a different association order, so
// reductions agree within the usual n eps sum|x| summation bound rather
// than bit-for-bit. For a fixed machine and selection the results are
// deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace mlefit::kernels {

struct KernelTable {
    std::string_view name;
    /// out[i] = log(in[i]); inputs must be positive and finite.
    void (*log_transform)(const double* in, double* out, std::size_t n);
    /// sum of in[i]
    double (*sum)(const double* in, std::size_t n);
    /// sum of (in[i] - center)^2
    double (*sum_sq_dev)(const double* in, std::size_t n, double center);
    /// s1 = sum exp(q1 logs[i]), s2 = sum exp(q2 logs[i])
    void (*exp_sums)(const double* logs, std::size_t n, double q1, double q2, double* s1,
                     double* s2);
};

const KernelTable& scalar_table() noexcept;

/// AVX2 table, or nullptr when not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// Table used by the library. Chosen once per process: AVX2 when available,
/// unless the environment variable MLEFIT_SIMD is set to "scalar".
const KernelTable& active() noexcept;

// Convenience wrappers over active().
void log_transform(std::span<const double> in, std::span<double> out);
double sum(std::span<const double> in);
double sum_sq_dev(std::span<const double> in, double center);
void exp_sums(std::span<const double> logs, double q1, double q2, double& s1, double& s2);

} // namespace mlefit::kernels
