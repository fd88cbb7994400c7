#include "fracpath/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace fracpath::kernels {

namespace {

bool backend_supported(Backend b) {
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
        return true; // NEON is mandatory on AArch64
#else
        return false;
#endif
    }
    return false;
}

const KernelTable* table_for(Backend b) {
    switch (b) {
    case Backend::scalar:
        return &scalar_table;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return &avx2_table;
#else
        break;
#endif
    case Backend::neon:
#if defined(__aarch64__)
        return &neon_table;
#else
        break;
#endif
    }
    return &scalar_table;
}

Backend pick_initial_backend() {
    if (const char* env = std::getenv("FRACPATH_SIMD")) {
        const std::string s = env;
        if (s == "scalar") return Backend::scalar;
        if (s == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
        if (s == "neon" && backend_supported(Backend::neon)) return Backend::neon;
        // "auto" or an unusable request falls through to detection
    }
    return best_supported_backend();
}

Backend g_backend = pick_initial_backend();
const KernelTable* g_table = table_for(g_backend);

} // namespace

Backend best_supported_backend() {
    if (backend_supported(Backend::avx2)) return Backend::avx2;
    if (backend_supported(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw std::runtime_error("kernel backend not supported on this host: " + backend_name(b));
    g_backend = b;
    g_table = table_for(b);
}

std::string backend_name(Backend b) {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) { return g_table->dot(a, b, n); }
double dot_rev(const double* a, const double* b, std::size_t n) { return g_table->dot_rev(a, b, n); }
double sum(const double* a, std::size_t n) { return g_table->sum(a, n); }
double sum_sq_diff(const double* a, std::size_t n) { return g_table->sum_sq_diff(a, n); }
double sum_abs_diff(const double* a, std::size_t n) { return g_table->sum_abs_diff(a, n); }

} // namespace fracpath::kernels
