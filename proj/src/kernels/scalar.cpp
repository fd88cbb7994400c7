#include "fracpath/kernels.hpp"

#include <cmath>

namespace fracpath::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot_rev_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[n - 1 - i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double sum_sq_diff_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = a[i] - a[i - 1];
        acc += d * d;
    }
    return acc;
}

double sum_abs_diff_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) acc += std::fabs(a[i] - a[i - 1]);
    return acc;
}

} // namespace

const KernelTable scalar_table = {
    dot_scalar, dot_rev_scalar, sum_scalar, sum_sq_diff_scalar, sum_abs_diff_scalar,
};

} // namespace fracpath::kernels
