#pragma once

#include <cstddef>
#include <string>

// Hot inner loops used by the samplers and the fractional-calculus quadrature.
// A scalar reference implementation always exists; on x86-64 an AVX2+FMA
// variant and on ARM64 a NEON variant are compiled in and picked at runtime.
// The FRACPATH_SIMD environment variable ("scalar", "avx2", "neon", "auto")
// overrides autodetection; tests pin backends via set_backend.

namespace fracpath::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    // sum over i of a[i] * b[n-1-i]  (correlation against a reversed kernel)
    double (*dot_rev)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    // sum of squared / absolute consecutive differences of a length-n array
    double (*sum_sq_diff)(const double*, std::size_t);
    double (*sum_abs_diff)(const double*, std::size_t);
};

extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif

Backend best_supported_backend();
Backend active_backend();
void set_backend(Backend b);          // throws if unsupported on this host
std::string backend_name(Backend b);

double dot(const double* a, const double* b, std::size_t n);
double dot_rev(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_sq_diff(const double* a, std::size_t n);
double sum_abs_diff(const double* a, std::size_t n);

} // namespace fracpath::kernels
