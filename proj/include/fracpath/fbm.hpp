#pragma once

#include <cstdint>
#include <vector>

#include "fracpath/path.hpp"

// Exact-in-distribution fractional Brownian motion sampling on uniform grids.
// Two samplers: dense Cholesky on the increment covariance (any step count up
// to a hard cap) and circulant embedding (FFT, near-linear, dyadic-friendly).

namespace fracpath::fbm {

enum class Method { cholesky, circulant };

struct FbmConfig {
    double hurst = 0.75;    // in (0,1)
    double horizon = 1.0;   // > 0
    std::size_t steps = 1024;
    std::uint64_t seed = 42;
    Method method = Method::circulant;
};

// E[B_s B_t] = (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) / 2
double fbm_covariance(double s, double t, double hurst);

// autocovariance of unit-spacing increments: gamma(k) for k = 0..n-1
std::vector<double> fgn_autocovariance(std::size_t n, double hurst);

inline constexpr std::size_t kCholeskyMaxSteps = 4096;

class CholeskySampler {
public:
    explicit CholeskySampler(const FbmConfig& cfg); // factorizes once, O(steps^3)
    SampledPath sample(std::uint64_t stream = 0) const;
    const FbmConfig& config() const { return cfg_; }
    double smallest_pivot() const { return smallest_pivot_; }

private:
    FbmConfig cfg_;
    std::vector<double> chol_; // lower triangle, packed row-major
    double smallest_pivot_ = 0.0;
};

struct CirculantDiagnostics {
    std::size_t embed_size = 0;     // circulant dimension m (power of two)
    double min_eigenvalue = 0.0;    // most negative eigenvalue before clamping
    std::size_t clamped = 0;        // eigenvalues in [-tol, 0) set to zero
};

class CirculantSampler {
public:
    explicit CirculantSampler(const FbmConfig& cfg); // eigen setup once, O(m log m)
    SampledPath sample(std::uint64_t stream = 0) const;
    const FbmConfig& config() const { return cfg_; }
    const CirculantDiagnostics& diagnostics() const { return diag_; }

private:
    FbmConfig cfg_;
    std::vector<double> sqrt_eig_; // sqrt of circulant eigenvalues
    CirculantDiagnostics diag_;
};

// one-shot entry points (each builds its sampler and draws stream 0)
SampledPath sample_cholesky(const FbmConfig& cfg);
SampledPath sample_circulant(const FbmConfig& cfg);
SampledPath sample_fbm(const FbmConfig& cfg, std::uint64_t stream = 0);

void validate(const FbmConfig& cfg); // throws std::invalid_argument

} // namespace fracpath::fbm
