// AVX2 + FMA variants of the sample reductions. This translation unit is the
// only one compiled with -mavx2 -mfma; nothing here may be called unless the
// dispatcher has confirmed CPU support.

#include "mlefit/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace mlefit::kernels {

namespace {

// fdlibm log: x = 2^k m, m in [sqrt(1/2), sqrt(2)), f = m - 1, s = f / (2 + f).
constexpr double kLg1 = 6.666666666666735130e-01;
constexpr double kLg2 = 3.999999999940941908e-01;
constexpr double kLg3 = 2.857142874366239149e-01;
constexpr double kLg4 = 2.222219843214978396e-01;
constexpr double kLg5 = 1.818357216161805012e-01;
constexpr double kLg6 = 1.531383769920937332e-01;
constexpr double kLg7 = 1.479819860511658591e-01;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kSqrt2 = 1.41421356237309504880;

// fdlibm exp remez coefficients for r in [-ln2/2, ln2/2].
constexpr double kP1 = 1.66666666666666019037e-01;
constexpr double kP2 = -2.77777777770155933842e-03;
constexpr double kP3 = 6.61375632143793436117e-05;
constexpr double kP4 = -1.65339022054652515390e-06;
constexpr double kP5 = 4.13813679705723846039e-08;
constexpr double kInvLn2 = 1.44269504088896338700e+00;
constexpr double kExpLimit = 708.0;

inline __m256d log4(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i exponent_bits = _mm256_srli_epi64(bits, 52);
    const __m256i mantissa_bits =
        _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                        _mm256_set1_epi64x(0x3FF0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mantissa_bits);

    // exponent_bits (0..2047) to double via the 2^52 magic constant
    const __m256d magic = _mm256_set1_pd(0x1.0p52);
    const __m256d biased = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(exponent_bits, _mm256_castpd_si256(magic))), magic);
    __m256d k = _mm256_sub_pd(biased, _mm256_set1_pd(1023.0));

    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    k = _mm256_add_pd(k, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d f = _mm256_sub_pd(m, one);
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
    const __m256d z = _mm256_mul_pd(s, s);
    const __m256d w = _mm256_mul_pd(z, z);
    const __m256d t1 = _mm256_mul_pd(
        w, _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, _mm256_set1_pd(kLg6), _mm256_set1_pd(kLg4)),
                           _mm256_set1_pd(kLg2)));
    const __m256d t2 = _mm256_mul_pd(
        z, _mm256_fmadd_pd(
               w,
               _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, _mm256_set1_pd(kLg7), _mm256_set1_pd(kLg5)),
                               _mm256_set1_pd(kLg3)),
               _mm256_set1_pd(kLg1)));
    const __m256d r = _mm256_add_pd(t2, t1);
    const __m256d hfsq = _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_mul_pd(f, f));
    // k ln2_hi - ((hfsq - (s (hfsq + R) + k ln2_lo)) - f)
    const __m256d sr = _mm256_fmadd_pd(s, _mm256_add_pd(hfsq, r), _mm256_mul_pd(k, _mm256_set1_pd(kLn2Lo)));
    return _mm256_fmsub_pd(k, _mm256_set1_pd(kLn2Hi), _mm256_sub_pd(_mm256_sub_pd(hfsq, sr), f));
}

inline __m256d exp4(__m256d x) {
    const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kInvLn2)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d hi = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Hi), x);
    const __m256d lo = _mm256_mul_pd(k, _mm256_set1_pd(kLn2Lo));
    const __m256d r = _mm256_sub_pd(hi, lo);
    const __m256d t = _mm256_mul_pd(r, r);
    __m256d poly = _mm256_fmadd_pd(t, _mm256_set1_pd(kP5), _mm256_set1_pd(kP4));
    poly = _mm256_fmadd_pd(t, poly, _mm256_set1_pd(kP3));
    poly = _mm256_fmadd_pd(t, poly, _mm256_set1_pd(kP2));
    poly = _mm256_fmadd_pd(t, poly, _mm256_set1_pd(kP1));
    const __m256d c = _mm256_fnmadd_pd(t, poly, r);
    // y = 1 - ((lo - (r c)/(2 - c)) - hi)
    const __m256d rc = _mm256_div_pd(_mm256_mul_pd(r, c), _mm256_sub_pd(_mm256_set1_pd(2.0), c));
    const __m256d y =
        _mm256_sub_pd(_mm256_set1_pd(1.0), _mm256_sub_pd(_mm256_sub_pd(lo, rc), hi));

    const __m128i k32 = _mm256_cvtpd_epi32(k);
    const __m256i k64 = _mm256_cvtepi32_epi64(k32);
    const __m256i scale_bits =
        _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(y, _mm256_castsi256_pd(scale_bits));
}

// Lanes outside the polynomial's handled range go through libm.
inline bool log_lanes_ok(__m256d x) {
    const __m256d ge = _mm256_cmp_pd(x, _mm256_set1_pd(std::numeric_limits<double>::min()), _CMP_GE_OQ);
    const __m256d le = _mm256_cmp_pd(x, _mm256_set1_pd(std::numeric_limits<double>::max()), _CMP_LE_OQ);
    return _mm256_movemask_pd(_mm256_and_pd(ge, le)) == 0xF;
}

inline bool exp_lanes_ok(__m256d x) {
    const __m256d ax = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
    return _mm256_movemask_pd(_mm256_cmp_pd(ax, _mm256_set1_pd(kExpLimit), _CMP_LE_OQ)) == 0xF;
}

inline double horizontal_sum(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void log_transform_avx2(const double* in, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(in + i);
        if (log_lanes_ok(x)) {
            _mm256_storeu_pd(out + i, log4(x));
        } else {
            for (std::size_t j = i; j < i + 4; ++j) {
                out[j] = std::log(in[j]);
            }
        }
    }
    for (; i < n; ++i) {
        out[i] = std::log(in[i]);
    }
}

double sum_avx2(const double* in, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(in + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(in + i + 4));
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        s += in[i];
    }
    return s;
}

double sum_sq_dev_avx2(const double* in, std::size_t n, double center) {
    const __m256d c = _mm256_set1_pd(center);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(in + i), c);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(in + i + 4), c);
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = in[i] - center;
        s += d * d;
    }
    return s;
}

void exp_sums_avx2(const double* logs, std::size_t n, double q1, double q2, double* s1,
                   double* s2) {
    const __m256d vq1 = _mm256_set1_pd(q1);
    const __m256d vq2 = _mm256_set1_pd(q2);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    double tail1 = 0.0;
    double tail2 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d l = _mm256_loadu_pd(logs + i);
        const __m256d x1 = _mm256_mul_pd(vq1, l);
        const __m256d x2 = _mm256_mul_pd(vq2, l);
        if (exp_lanes_ok(x1) && exp_lanes_ok(x2)) {
            acc1 = _mm256_add_pd(acc1, exp4(x1));
            acc2 = _mm256_add_pd(acc2, exp4(x2));
        } else {
            for (std::size_t j = i; j < i + 4; ++j) {
                tail1 += std::exp(q1 * logs[j]);
                tail2 += std::exp(q2 * logs[j]);
            }
        }
    }
    for (; i < n; ++i) {
        tail1 += std::exp(q1 * logs[i]);
        tail2 += std::exp(q2 * logs[i]);
    }
    *s1 = horizontal_sum(acc1) + tail1;
    *s2 = horizontal_sum(acc2) + tail2;
}

constexpr KernelTable kAvx2{"avx2", log_transform_avx2, sum_avx2, sum_sq_dev_avx2, exp_sums_avx2};

} // namespace

const KernelTable* avx2_table_unchecked() noexcept { return &kAvx2; }

} // namespace mlefit::kernels

#else

namespace mlefit::kernels {
const KernelTable* avx2_table_unchecked() noexcept { return nullptr; }
} // namespace mlefit::kernels

#endif
