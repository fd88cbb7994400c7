#include "fracpath/fbm.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "fracpath/fft.hpp"
#include "fracpath/kernels.hpp"
#include "fracpath/rng.hpp"

namespace fracpath::fbm {

void validate(const FbmConfig& cfg) {
    if (!(cfg.hurst > 0.0 && cfg.hurst < 1.0))
        throw std::invalid_argument("fbm: hurst must lie in (0,1), got " + std::to_string(cfg.hurst));
    if (!(cfg.horizon > 0.0))
        throw std::invalid_argument("fbm: horizon must be positive, got " + std::to_string(cfg.horizon));
    if (cfg.steps < 1)
        throw std::invalid_argument("fbm: steps must be at least 1");
}

double fbm_covariance(double s, double t, double hurst) {
    if (s < 0.0 || t < 0.0)
        throw std::domain_error("fbm_covariance: times must be nonnegative");
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::domain_error("fbm_covariance: hurst must lie in (0,1)");
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(std::fabs(t), h2) + std::pow(std::fabs(s), h2) -
                  std::pow(std::fabs(t - s), h2));
}

std::vector<double> fgn_autocovariance(std::size_t n, double hurst) {
    const double h2 = 2.0 * hurst;
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kd = static_cast<double>(k);
        g[k] = 0.5 * (std::pow(kd + 1.0, h2) + std::pow(std::fabs(kd - 1.0), h2) -
                      2.0 * std::pow(kd, h2));
    }
    return g;
}

namespace {

SampledPath assemble_path(const FbmConfig& cfg, const std::vector<double>& unit_increments) {
    const double dt = cfg.horizon / static_cast<double>(cfg.steps);
    const double scale = std::pow(dt, cfg.hurst);
    SampledPath p;
    p.times = uniform_grid(cfg.horizon, cfg.steps);
    p.values.resize(cfg.steps + 1);
    p.values[0] = 0.0;
    for (std::size_t i = 0; i < cfg.steps; ++i)
        p.values[i + 1] = p.values[i] + scale * unit_increments[i];
    return p;
}

} // namespace

// ---------------------------------------------------------------------------
// Cholesky sampler
// ---------------------------------------------------------------------------

CholeskySampler::CholeskySampler(const FbmConfig& cfg) : cfg_(cfg) {
    validate(cfg);
    const std::size_t n = cfg.steps;
    if (n > kCholeskyMaxSteps)
        throw std::invalid_argument("fbm: cholesky sampler capped at " +
                                    std::to_string(kCholeskyMaxSteps) + " steps, got " +
                                    std::to_string(n));

    const std::vector<double> gamma = fgn_autocovariance(n, cfg.hurst);
    chol_.assign(n * (n + 1) / 2, 0.0);
    auto row = [this](std::size_t i) { return chol_.data() + i * (i + 1) / 2; };

    smallest_pivot_ = gamma[0];
    for (std::size_t i = 0; i < n; ++i) {
        double* li = row(i);
        for (std::size_t j = 0; j < i; ++j) {
            const double* lj = row(j);
            li[j] = (gamma[i - j] - kernels::dot(li, lj, j)) / lj[j];
        }
        const double d = gamma[0] - kernels::dot(li, li, i);
        if (i == 0 || d < smallest_pivot_) smallest_pivot_ = d;
        if (!(d > 0.0))
            throw std::runtime_error(
                "fbm: increment covariance not positive definite at row " + std::to_string(i) +
                " (pivot " + std::to_string(d) + ")");
        li[i] = std::sqrt(d);
    }
}

SampledPath CholeskySampler::sample(std::uint64_t stream) const {
    const std::size_t n = cfg_.steps;
    Philox rng(cfg_.seed, stream);
    std::vector<double> z(n), y(n);
    rng.fill_normals(z.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = kernels::dot(chol_.data() + i * (i + 1) / 2, z.data(), i + 1);
    return assemble_path(cfg_, y);
}

// ---------------------------------------------------------------------------
// Circulant-embedding sampler
// ---------------------------------------------------------------------------

CirculantSampler::CirculantSampler(const FbmConfig& cfg) : cfg_(cfg) {
    validate(cfg);
    const std::size_t n = cfg.steps;
    const std::size_t m = next_pow2(std::max<std::size_t>(2 * n, 2));
    diag_.embed_size = m;

    const std::vector<double> gamma = fgn_autocovariance(m / 2 + 1, cfg.hurst);
    std::vector<std::complex<double>> c(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t d = j <= m / 2 ? j : m - j;
        c[j] = gamma[d];
    }
    fft_pow2(c, false);

    double max_eig = 0.0;
    for (std::size_t k = 0; k < m; ++k) max_eig = std::max(max_eig, c[k].real());
    const double tol = 1e-10 * max_eig;

    sqrt_eig_.resize(m);
    diag_.min_eigenvalue = c[0].real();
    for (std::size_t k = 0; k < m; ++k) {
        double lam = c[k].real();
        diag_.min_eigenvalue = std::min(diag_.min_eigenvalue, lam);
        if (lam < -tol)
            throw std::runtime_error(
                "fbm: circulant embedding is not nonnegative definite (eigenvalue " +
                std::to_string(lam) + " at index " + std::to_string(k) + ")");
        if (lam < 0.0) {
            lam = 0.0;
            ++diag_.clamped;
        }
        sqrt_eig_[k] = std::sqrt(lam);
    }
}

SampledPath CirculantSampler::sample(std::uint64_t stream) const {
    const std::size_t n = cfg_.steps;
    const std::size_t m = diag_.embed_size;

    Philox rng(cfg_.seed, stream);
    std::vector<double> z(m);
    rng.fill_normals(z.data(), m);

    // Hermitian-symmetric Gaussian spectrum from exactly m standard normals
    const double inv_sqrt2 = 0.70710678118654752440;
    std::vector<std::complex<double>> spec(m);
    spec[0] = sqrt_eig_[0] * z[0];
    spec[m / 2] = sqrt_eig_[m / 2] * z[1];
    for (std::size_t k = 1; k < m / 2; ++k) {
        const std::complex<double> zk(z[2 * k] * inv_sqrt2, z[2 * k + 1] * inv_sqrt2);
        spec[k] = sqrt_eig_[k] * zk;
        spec[m - k] = sqrt_eig_[m - k] * std::conj(zk);
    }

    fft_pow2(spec, false);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<double> incr(n);
    for (std::size_t i = 0; i < n; ++i) incr[i] = scale * spec[i].real();
    return assemble_path(cfg_, incr);
}

SampledPath sample_cholesky(const FbmConfig& cfg) { return CholeskySampler(cfg).sample(0); }

SampledPath sample_circulant(const FbmConfig& cfg) { return CirculantSampler(cfg).sample(0); }

SampledPath sample_fbm(const FbmConfig& cfg, std::uint64_t stream) {
    if (cfg.method == Method::cholesky) return CholeskySampler(cfg).sample(stream);
    return CirculantSampler(cfg).sample(stream);
}

} // namespace fracpath::fbm
