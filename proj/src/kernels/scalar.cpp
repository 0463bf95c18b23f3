#include "mlefit/kernels.hpp"

#include <cmath>

namespace mlefit::kernels {

namespace {

void log_transform_scalar(const double* in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::log(in[i]);
    }
}

double sum_scalar(const double* in, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += in[i];
    }
    return s;
}

double sum_sq_dev_scalar(const double* in, std::size_t n, double center) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = in[i] - center;
        s += d * d;
    }
    return s;
}

void exp_sums_scalar(const double* logs, std::size_t n, double q1, double q2, double* s1,
                     double* s2) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a += std::exp(q1 * logs[i]);
        b += std::exp(q2 * logs[i]);
    }
    *s1 = a;
    *s2 = b;
}

constexpr KernelTable kScalar{"scalar", log_transform_scalar, sum_scalar, sum_sq_dev_scalar,
                              exp_sums_scalar};

} // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

} // namespace mlefit::kernels
