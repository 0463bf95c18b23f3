#include "mlefit/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <string_view>

namespace mlefit::kernels {

// Defined in avx2.cpp; nullptr when that TU was built without AVX2 support.
const KernelTable* avx2_table_unchecked() noexcept;

namespace {

bool cpu_has_avx2() noexcept {
#if (defined(__x86_64__) || defined(__i386__)) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select() noexcept {
    const char* env = std::getenv("MLEFIT_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") {
        return scalar_table();
    }
    if (const KernelTable* t = avx2_table()) {
        return *t;
    }
    return scalar_table();
}

} // namespace

const KernelTable* avx2_table() noexcept {
    static const bool supported = cpu_has_avx2();
    return supported ? avx2_table_unchecked() : nullptr;
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

void log_transform(std::span<const double> in, std::span<double> out) {
    assert(out.size() >= in.size());
    active().log_transform(in.data(), out.data(), in.size());
}

double sum(std::span<const double> in) { return active().sum(in.data(), in.size()); }

double sum_sq_dev(std::span<const double> in, double center) {
    return active().sum_sq_dev(in.data(), in.size(), center);
}

void exp_sums(std::span<const double> logs, double q1, double q2, double& s1, double& s2) {
    active().exp_sums(logs.data(), logs.size(), q1, q2, &s1, &s2);
}

} // namespace mlefit::kernels
