#include "fracpath/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>
#include <cmath>

namespace fracpath::kernels {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot_rev_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t va = vld1q_f64(a + i);
        float64x2_t vb = vld1q_f64(b + n - 2 - i);
        acc = vfmaq_f64(acc, va, vextq_f64(vb, vb, 1));
    }
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += a[i] * b[n - 1 - i];
    return r;
}

double sum_neon(const double* a, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
        acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
    }
    double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
    for (; i < n; ++i) acc += a[i];
    return acc;
}

double sum_sq_diff_neon(const double* a, std::size_t n) {
    if (n < 2) return 0.0;
    const std::size_t m = n - 1;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(a + i + 1), vld1q_f64(a + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double r = vaddvq_f64(acc);
    for (; i < m; ++i) {
        const double d = a[i + 1] - a[i];
        r += d * d;
    }
    return r;
}

double sum_abs_diff_neon(const double* a, std::size_t n) {
    if (n < 2) return 0.0;
    const std::size_t m = n - 1;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(a + i + 1), vld1q_f64(a + i));
        acc = vaddq_f64(acc, vabsq_f64(d));
    }
    double r = vaddvq_f64(acc);
    for (; i < m; ++i) r += std::fabs(a[i + 1] - a[i]);
    return r;
}

} // namespace

const KernelTable neon_table = {
    dot_neon, dot_rev_neon, sum_neon, sum_sq_diff_neon, sum_abs_diff_neon,
};

} // namespace fracpath::kernels

#endif // __aarch64__
