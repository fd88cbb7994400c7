#include "fracpath/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracpath/fbm.hpp"
#include "fracpath/fft.hpp"
#include "fracpath/kernels.hpp"
#include "fracpath/parallel.hpp"

namespace fracpath::experiments {

void validate(const McPlan& plan) {
    if (plan.replicas < 1) throw std::invalid_argument("mc plan: replicas must be >= 1");
    if (!(plan.horizon > 0.0)) throw std::invalid_argument("mc plan: horizon must be positive");
    if (!(plan.hurst > 0.0 && plan.hurst < 1.0))
        throw std::invalid_argument("mc plan: hurst must lie in (0,1)");
    if (plan.grids.empty()) throw std::invalid_argument("mc plan: grids must be nonempty");
    std::size_t prev = 0;
    for (std::size_t g : plan.grids) {
        if (!is_pow2(g)) throw std::invalid_argument("mc plan: grids must be powers of two");
        if (g <= prev) throw std::invalid_argument("mc plan: grids must be strictly increasing");
        prev = g;
    }
}

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    const std::size_t m = xs.size();
    if (m == 0) return r;
    r.mean = kahan_sum(xs) / static_cast<double>(m);
    if (m == 1) return r;
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double d = (x - r.mean) * (x - r.mean);
        const double y = d - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    r.se = std::sqrt(s / (static_cast<double>(m) * static_cast<double>(m - 1)));
    return r;
}

SlopeFit fit_loglog(const std::vector<double>& n, const std::vector<double>& y) {
    if (n.size() != y.size() || n.size() < 2)
        throw std::invalid_argument("fit_loglog: need >= 2 matching points");
    const std::size_t m = n.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(n[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_loglog: inputs must be positive");
        lx[i] = std::log(n[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    if (m > 2) {
        const double b0 = my - f.slope * mx;
        double ssr = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double e = ly[i] - (b0 + f.slope * lx[i]);
            ssr += e * e;
        }
        f.slope_err = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
    }
    return f;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double clark_ocone_integrand(double running_max, double value, double t, double horizon) {
    if (running_max < value)
        throw std::invalid_argument("clark_ocone_integrand: running_max must dominate value");
    if (!(t < horizon)) throw std::invalid_argument("clark_ocone_integrand: requires t < horizon");
    const double gap = running_max - value;
    return 2.0 * (1.0 - normal_cdf(gap / std::sqrt(horizon - t)));
}

SampledPath brownian_path(double horizon, std::size_t steps, std::uint64_t seed,
                          std::uint64_t stream) {
    if (!(horizon > 0.0) || steps < 1)
        throw std::invalid_argument("brownian_path: need horizon > 0, steps >= 1");
    Philox rng(seed, stream);
    const double dt = horizon / static_cast<double>(steps);
    const double sq = std::sqrt(dt);
    SampledPath p;
    p.times = uniform_grid(horizon, steps);
    p.values.resize(steps + 1);
    p.values[0] = 0.0;
    for (std::size_t i = 0; i < steps; ++i) p.values[i + 1] = p.values[i] + sq * rng.next_normal();
    return p;
}

namespace {

SampledPath subsample_path(const SampledPath& fine, std::size_t ratio, double horizon) {
    const std::size_t nf = fine.size() - 1;
    const std::size_t n = nf / ratio;
    SampledPath out;
    out.times = uniform_grid(horizon, n);
    out.values.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) out.values[i] = fine.values[i * ratio];
    return out;
}

} // namespace

RefinedPair sample_refined_pair(double hurst, double horizon, std::size_t steps,
                                std::size_t refine, std::uint64_t seed, std::uint64_t stream) {
    if (refine < 1 || !is_pow2(refine))
        throw std::invalid_argument("sample_refined_pair: refine must be a power of two >= 1");
    fbm::FbmConfig cfg;
    cfg.hurst = hurst;
    cfg.horizon = horizon;
    cfg.steps = steps * refine;
    cfg.seed = seed;
    cfg.method = fbm::Method::circulant;
    RefinedPair pr;
    pr.fine = fbm::CirculantSampler(cfg).sample(stream);
    pr.coarse = subsample_path(pr.fine, refine, horizon);
    return pr;
}

// ---------------------------------------------------------------------------
// Running-maximum representation: E(S_T) and the Clark-Ocone residual
// ---------------------------------------------------------------------------

ExperimentReport mc_max_representation(const McPlan& plan) {
    validate(plan);
    if (plan.hurst != 0.5)
        throw std::invalid_argument("mc_max_representation: requires hurst = 0.5");
    const double T = plan.horizon;
    const double target = std::sqrt(2.0 * T / M_PI);
    ExperimentReport rep;
    for (std::size_t gi = 0; gi < plan.grids.size(); ++gi) {
        const std::size_t n = plan.grids[gi];
        const double dt = T / static_cast<double>(n);
        const double sq = std::sqrt(dt);
        const std::size_t R = plan.replicas;
        std::vector<double> st(R), rsq(R);
        parallel_for(R, [&](std::size_t r) {
            Philox rng(plan.base_seed, static_cast<std::uint64_t>(gi) * R + r);
            double W = 0.0, M = 0.0;
            double acc = 0.0, comp = 0.0; // compensated forward Riemann sum
            for (std::size_t i = 0; i < n; ++i) {
                const double t_prev = static_cast<double>(i) * dt;
                const double h = clark_ocone_integrand(M, W, t_prev, T);
                const double dW = sq * rng.next_normal();
                const double y = h * dW - comp;
                const double t = acc + y;
                comp = (t - acc) - y;
                acc = t;
                W += dW;
                if (W > M) M = W;
            }
            st[r] = M;
            const double resid = M - target - acc;
            rsq[r] = resid * resid;
        });
        const MeanSe ms = mean_se(st);
        const MeanSe msq = mean_se(rsq);
        const double rms = std::sqrt(msq.mean);
        const double rms_se = rms > 0.0 ? msq.se / (2.0 * rms) : 0.0;
        rep.rows.push_back({"maxrep_estimate", n, ReportRow::na, ms.mean, ms.se, ReportRow::na,
                            ReportRow::na});
        rep.rows.push_back({"maxrep_abs_error", n, ReportRow::na, std::fabs(ms.mean - target),
                            ReportRow::na, ReportRow::na, ReportRow::na});
        rep.rows.push_back(
            {"maxrep_residual_rms", n, ReportRow::na, rms, rms_se, ReportRow::na, ReportRow::na});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// pathwise functionals
// ---------------------------------------------------------------------------

double quadratic_variation(const SampledPath& path) {
    if (path.size() < 2) throw std::invalid_argument("quadratic_variation: need >= 2 points");
    return kernels::sum_sq_diff(path.values.data(), path.values.size());
}

double change_of_variables_residual(const SampledPath& path, CovG g) {
    if (path.size() < 2)
        throw std::invalid_argument("change_of_variables_residual: need >= 2 points");
    const std::vector<double>& v = path.values;
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double deriv =
            g == CovG::square ? 2.0 * v[i - 1] : (v[i - 1] > 0.0 ? 1.0 : -1.0);
        const double y = deriv * (v[i] - v[i - 1]) - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    const double gT = g == CovG::square ? v.back() * v.back() : std::fabs(v.back());
    const double g0 = g == CovG::square ? v.front() * v.front() : std::fabs(v.front());
    return std::fabs(gT - g0 - acc);
}

double record_indicator_sum(const SampledPath& path, RecordMode mode, double eps) {
    if (path.size() < 2) throw std::invalid_argument("record_indicator_sum: need >= 2 points");
    if (mode == RecordMode::eps_band && !(eps > 0.0))
        throw std::invalid_argument("record_indicator_sum: eps_band requires eps > 0");
    const std::vector<double> M = prefix_max(path.values);
    const std::vector<double>& v = path.values;
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const bool in = mode == RecordMode::discrete_record ? v[i] == M[i] : M[i] - v[i] <= eps;
        if (!in) continue;
        const double y = (v[i] - v[i - 1]) - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

namespace {

// validates that `reference` refines `path` (same horizon, integer step ratio)
std::size_t refinement_ratio(const SampledPath& path, const SampledPath& reference) {
    if (path.size() < 2 || reference.size() < path.size())
        throw std::invalid_argument("record indicator: bad path/reference sizes");
    const std::size_t n = path.size() - 1;
    const std::size_t nf = reference.size() - 1;
    if (nf % n != 0)
        throw std::invalid_argument("record indicator: reference grid must refine the path grid");
    if (std::fabs(reference.times.back() - path.times.back()) >
        1e-12 * (1.0 + path.times.back()))
        throw std::invalid_argument("record indicator: horizons differ");
    return nf / n;
}

} // namespace

double record_indicator_sum(const SampledPath& path, const SampledPath& reference, double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("record_indicator_sum: eps must be >= 0");
    const std::size_t n = path.size() - 1;
    const std::size_t ratio = refinement_ratio(path, reference);
    const std::vector<double> Mref = prefix_max(reference.values);
    const std::vector<double>& v = path.values;
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (Mref[i * ratio] - v[i] > eps) continue;
        const double y = (v[i] - v[i - 1]) - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

double record_occupation(const SampledPath& path, double eps) {
    if (path.size() < 1) throw std::invalid_argument("record_occupation: empty path");
    if (!(eps >= 0.0)) throw std::invalid_argument("record_occupation: eps must be >= 0");
    const std::vector<double> M = prefix_max(path.values);
    std::size_t count = 0;
    for (std::size_t i = 0; i < path.size(); ++i)
        if (M[i] - path.values[i] <= eps) ++count;
    return static_cast<double>(count) / static_cast<double>(path.size());
}

namespace {

fraccalc::GridFn indicator_from_max(const SampledPath& path, const std::vector<double>& M,
                                    std::size_t stride, double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("record_indicator_fn: eps must be >= 0");
    fraccalc::GridFn f;
    f.times = path.times;
    f.values.assign(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i)
        f.values[i] = (M[i * stride] - path.values[i] <= eps) ? 1.0 : 0.0;
    return f; // origin forced to 0: valid D^beta input, and {0} has measure zero
}

} // namespace

fraccalc::GridFn record_indicator_fn(const SampledPath& path, double eps) {
    return indicator_from_max(path, prefix_max(path.values), 1, eps);
}

fraccalc::GridFn record_indicator_fn(const SampledPath& path, const SampledPath& reference,
                                     double eps) {
    const std::size_t ratio = refinement_ratio(path, reference);
    return indicator_from_max(path, prefix_max(reference.values), ratio, eps);
}

ExperimentReport gls_indicator_experiment(const RefinedPair& pair, double hurst,
                                          const fraccalc::FracParams& params,
                                          const std::vector<double>& eps_list) {
    if (!(hurst > 0.5))
        throw std::invalid_argument("gls_indicator_experiment: requires hurst > 1/2");
    if (!(params.beta > 1.0 - hurst && params.beta < 0.5))
        throw std::invalid_argument(
            "gls_indicator_experiment: beta must lie in (1-hurst, 1/2), got " +
            std::to_string(params.beta));
    if (eps_list.empty())
        throw std::invalid_argument("gls_indicator_experiment: eps list must be nonempty");
    const SampledPath& path = pair.coarse;
    const fraccalc::GridFn gpath = fraccalc::to_gridfn(path);
    const std::size_t n = path.size() - 1;
    const double T = path.times.back();
    fraccalc::FracParams dual{1.0 - params.beta, params.grid_points};
    const double w1_path = fraccalc::besov_norm_w1(gpath, dual);
    const double gamma_beta = std::tgamma(params.beta);
    ExperimentReport rep;
    for (double eps : eps_list) {
        const fraccalc::GridFn f = record_indicator_fn(path, pair.fine, eps);
        const double w2 = fraccalc::besov_norm_w2(f, params);
        const double gls = fraccalc::gls_integral(f, gpath, params, T);
        const double bound = w2 * w1_path / gamma_beta;
        rep.rows.push_back({"indicator_w2", n, eps, w2, ReportRow::na, ReportRow::na, ReportRow::na});
        rep.rows.push_back(
            {"indicator_gls", n, eps, gls, ReportRow::na, ReportRow::na, ReportRow::na});
        rep.rows.push_back(
            {"indicator_bound", n, eps, bound, ReportRow::na, ReportRow::na, ReportRow::na});
    }
    return rep;
}

double positive_max_check(const McPlan& plan) {
    validate(plan);
    const std::size_t n = plan.grids.back();
    const std::size_t R = plan.replicas;
    fbm::FbmConfig cfg;
    cfg.hurst = plan.hurst;
    cfg.horizon = plan.horizon;
    cfg.steps = n;
    cfg.seed = plan.base_seed;
    const fbm::CirculantSampler sampler(cfg);
    const std::size_t istar =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) / 10.0)));
    std::vector<double> hit(R, 0.0);
    parallel_for(R, [&](std::size_t r) {
        const SampledPath p = sampler.sample(r);
        double m = p.values[1];
        for (std::size_t j = 2; j <= istar; ++j) m = std::max(m, p.values[j]);
        hit[r] = m <= 0.0 ? 1.0 : 0.0;
    });
    return kahan_sum(hit) / static_cast<double>(R);
}

// ---------------------------------------------------------------------------
// batteries
// ---------------------------------------------------------------------------

ExperimentReport run_qv_study(const McPlan& plan) {
    validate(plan);
    ExperimentReport rep;
    std::vector<double> ns, means;
    for (std::size_t gi = 0; gi < plan.grids.size(); ++gi) {
        const std::size_t n = plan.grids[gi];
        const std::size_t R = plan.replicas;
        std::vector<double> qv(R);
        if (plan.hurst == 0.5) {
            parallel_for(R, [&](std::size_t r) {
                qv[r] = quadratic_variation(brownian_path(
                    plan.horizon, n, plan.base_seed, static_cast<std::uint64_t>(gi) * R + r));
            });
        } else {
            fbm::FbmConfig cfg;
            cfg.hurst = plan.hurst;
            cfg.horizon = plan.horizon;
            cfg.steps = n;
            cfg.seed = plan.base_seed;
            const fbm::CirculantSampler sampler(cfg);
            parallel_for(R, [&](std::size_t r) {
                qv[r] = quadratic_variation(sampler.sample(static_cast<std::uint64_t>(gi) * R + r));
            });
        }
        const MeanSe ms = mean_se(qv);
        rep.rows.push_back(
            {"qv_mean", n, ReportRow::na, ms.mean, ms.se, ReportRow::na, ReportRow::na});
        ns.push_back(static_cast<double>(n));
        means.push_back(ms.mean);
    }
    if (ns.size() >= 2) {
        const SlopeFit f = fit_loglog(ns, means);
        rep.rows.push_back(
            {"qv_slope", 0, ReportRow::na, ReportRow::na, ReportRow::na, f.slope, f.slope_err});
    }
    return rep;
}

ExperimentReport run_maxrep(const McPlan& plan) { return mc_max_representation(plan); }

ExperimentReport run_failure_battery(const McPlan& plan, double beta,
                                     const std::vector<double>& eps_factors,
                                     std::size_t norm_replicas) {
    validate(plan);
    if (!(plan.hurst > 0.5))
        throw std::invalid_argument("failure battery: requires hurst > 1/2");
    if (!(beta > 1.0 - plan.hurst && beta < 0.5))
        throw std::invalid_argument("failure battery: beta must lie in (1-hurst, 1/2)");
    if (eps_factors.empty())
        throw std::invalid_argument("failure battery: eps factor list must be nonempty");

    const std::size_t R = plan.replicas;
    const std::size_t band_grid = plan.grids[plan.grids.size() / 2];
    constexpr std::size_t kRefine = 16;
    ExperimentReport rep;

    std::size_t violations = 0;
    std::vector<std::vector<double>> band_sums(eps_factors.size(), std::vector<double>(R));
    for (std::size_t gi = 0; gi < plan.grids.size(); ++gi) {
        const std::size_t n = plan.grids[gi];
        fbm::FbmConfig cfg;
        cfg.hurst = plan.hurst;
        cfg.horizon = plan.horizon;
        cfg.steps = n * kRefine;
        cfg.seed = plan.base_seed;
        const fbm::CirculantSampler sampler(cfg);

        std::vector<double> occ(R), drs(R), viol(R);
        const bool is_band_grid = n == band_grid;
        parallel_for(R, [&](std::size_t r) {
            SampledPath fine = sampler.sample(static_cast<std::uint64_t>(gi) * R + r);
            SampledPath path = subsample_path(fine, kRefine, plan.horizon);
            occ[r] = record_occupation(path, 0.0);
            drs[r] = record_indicator_sum(path, RecordMode::discrete_record);
            const std::vector<double> M = prefix_max(path.values);
            viol[r] = drs[r] < M.back() - path.values.front() ? 1.0 : 0.0;
            if (is_band_grid) {
                const auto [lo, hi] =
                    std::minmax_element(path.values.begin(), path.values.end());
                const double range = *hi - *lo;
                for (std::size_t e = 0; e < eps_factors.size(); ++e)
                    band_sums[e][r] =
                        std::fabs(record_indicator_sum(path, fine, eps_factors[e] * range));
            }
        });
        const MeanSe mocc = mean_se(occ);
        const MeanSe mdrs = mean_se(drs);
        violations += static_cast<std::size_t>(kahan_sum(viol));
        rep.rows.push_back(
            {"occupation_eps0", n, 0.0, mocc.mean, mocc.se, ReportRow::na, ReportRow::na});
        rep.rows.push_back(
            {"discrete_record_mean", n, ReportRow::na, mdrs.mean, mdrs.se, ReportRow::na,
             ReportRow::na});
    }
    rep.rows.push_back({"record_violations", 0, ReportRow::na, static_cast<double>(violations),
                        ReportRow::na, ReportRow::na, ReportRow::na});
    for (std::size_t e = 0; e < eps_factors.size(); ++e) {
        const MeanSe ms = mean_se(band_sums[e]);
        rep.rows.push_back({"eps_band_abs_sum", band_grid, eps_factors[e], ms.mean, ms.se,
                            ReportRow::na, ReportRow::na});
    }

    // Indicator-integrand probe: indicator Besov norm, GLS integral, and bound
    // along the same eps schedule, on fresh refined replicas at the band grid.
    if (norm_replicas > 0) {
        fbm::FbmConfig cfg;
        cfg.hurst = plan.hurst;
        cfg.horizon = plan.horizon;
        cfg.steps = band_grid * kRefine;
        cfg.seed = plan.base_seed;
        const fbm::CirculantSampler sampler(cfg);
        const fraccalc::FracParams params{beta, band_grid + 1};
        const std::uint64_t stream_base =
            static_cast<std::uint64_t>(plan.grids.size()) * R;

        std::vector<std::vector<double>> w2s(eps_factors.size(), std::vector<double>(norm_replicas));
        std::vector<std::vector<double>> glss(eps_factors.size(), std::vector<double>(norm_replicas));
        std::vector<std::vector<double>> ok(eps_factors.size(), std::vector<double>(norm_replicas));
        parallel_for(norm_replicas, [&](std::size_t r) {
            RefinedPair pr;
            pr.fine = sampler.sample(stream_base + r);
            pr.coarse = subsample_path(pr.fine, kRefine, plan.horizon);
            const fraccalc::GridFn gpath = fraccalc::to_gridfn(pr.coarse);
            fraccalc::FracParams dual{1.0 - beta, params.grid_points};
            const double w1_path = fraccalc::besov_norm_w1(gpath, dual);
            const auto [lo, hi] =
                std::minmax_element(pr.coarse.values.begin(), pr.coarse.values.end());
            const double range = *hi - *lo;
            for (std::size_t e = 0; e < eps_factors.size(); ++e) {
                const fraccalc::GridFn f =
                    record_indicator_fn(pr.coarse, pr.fine, eps_factors[e] * range);
                const double w2 = fraccalc::besov_norm_w2(f, params);
                const double gls =
                    fraccalc::gls_integral(f, gpath, params, pr.coarse.times.back());
                w2s[e][r] = w2;
                glss[e][r] = std::fabs(gls);
                const double bound = w2 * w1_path / std::tgamma(beta);
                ok[e][r] = std::fabs(gls) <= bound * (1.0 + 1e-6) ? 1.0 : 0.0;
            }
        });
        for (std::size_t e = 0; e < eps_factors.size(); ++e) {
            const MeanSe mw = mean_se(w2s[e]);
            const MeanSe mg = mean_se(glss[e]);
            rep.rows.push_back({"indicator_w2", band_grid, eps_factors[e], mw.mean, mw.se,
                                ReportRow::na, ReportRow::na});
            rep.rows.push_back({"indicator_gls_abs", band_grid, eps_factors[e], mg.mean, mg.se,
                                ReportRow::na, ReportRow::na});
            rep.rows.push_back({"indicator_bound_ok", band_grid, eps_factors[e],
                                kahan_sum(ok[e]) / static_cast<double>(norm_replicas),
                                ReportRow::na, ReportRow::na, ReportRow::na});
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// random corpora on the dyadic lattice k / 2^30
// ---------------------------------------------------------------------------

namespace {

double dyadic_uniform(Philox& rng) {
    const std::int64_t k =
        static_cast<std::int64_t>(rng.next_u64() % (2ull << 30)) - (1ll << 30);
    return static_cast<double>(k) / 1073741824.0; // exact: k / 2^30 in [-1, 1)
}

} // namespace

bv::PiecewiseLinearFn random_pl_fn(Philox& rng) {
    const std::size_t m = 2 + rng.next_u64() % 49; // knot count in [2, 50]
    std::vector<double> knots(m), values(m);
    knots[0] = 0.0;
    for (std::size_t i = 1; i < m; ++i)
        knots[i] = knots[i - 1] + rng.next_uniform_oc();
    for (std::size_t i = 0; i < m; ++i) values[i] = dyadic_uniform(rng);
    return bv::PiecewiseLinearFn(std::move(knots), std::move(values));
}

bv::StepFn random_step_fn(Philox& rng) {
    const std::size_t m = 1 + rng.next_u64() % 20; // jump count in [1, 20]
    std::vector<bv::Jump> jumps(m);
    double t = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        t += rng.next_uniform_oc();
        double size = dyadic_uniform(rng);
        if (size == 0.0) size = 1.0 / 1073741824.0;
        jumps[i] = {t, size};
    }
    const double horizon = t + rng.next_uniform_oc();
    return bv::StepFn(dyadic_uniform(rng), std::move(jumps), horizon);
}

ExperimentReport run_bvcheck(std::uint64_t seed, std::size_t corpus_size) {
    if (corpus_size < 1) throw std::invalid_argument("bvcheck: corpus size must be >= 1");
    Philox rng(seed, 0);
    double max_resid = 0.0, max_ac = 0.0;
    std::size_t jordan_failures = 0;
    for (std::size_t c = 0; c < corpus_size; ++c) {
        const bv::PiecewiseLinearFn f = random_pl_fn(rng);
        const double tv = bv::total_variation(f);
        const bv::PiecewiseLinearFn fstar = bv::running_max(f);
        const double ri = bv::record_integral(f);
        const double resid = std::fabs(fstar.values.back() - f.values.front() - ri) / (1.0 + tv);
        const double acd = std::fabs(bv::ac_check(f) - ri) / (1.0 + tv);
        max_resid = std::max(max_resid, resid);
        max_ac = std::max(max_ac, acd);

        const bv::JordanPair jp = bv::jordan_decompose(f);
        bool ok = true;
        double vtv = 0.0;
        for (std::size_t i = 0; i < f.knots.size(); ++i) {
            const double V = jp.positive_variation.values[i];
            const double W = jp.negative_variation.values[i];
            if (V - W != f.values[i] - f.values[0]) ok = false;
            if (i > 0 && (V < jp.positive_variation.values[i - 1] ||
                          W < jp.negative_variation.values[i - 1]))
                ok = false;
            vtv = V + W;
        }
        if (vtv != tv) ok = false;
        if (!ok) ++jordan_failures;
    }

    std::size_t step_identity_failures = 0, step_nonzero_failures = 0, with_gap = 0;
    for (std::size_t c = 0; c < corpus_size; ++c) {
        const bv::StepFn f = random_step_fn(rng);
        const bv::StepRecordResult r = bv::record_integral_step(f);
        if (r.residual != -r.gap_sum) ++step_identity_failures;
        if (r.gap_sum > 0.0) {
            ++with_gap;
            if (r.residual == 0.0) ++step_nonzero_failures;
        }
    }

    ExperimentReport rep;
    auto put = [&](const char* name, double v) {
        rep.rows.push_back({name, corpus_size, ReportRow::na, v, ReportRow::na, ReportRow::na,
                            ReportRow::na});
    };
    put("bvcheck_pl_resid_norm_max", max_resid);
    put("bvcheck_ac_diff_norm_max", max_ac);
    put("bvcheck_jordan_failures", static_cast<double>(jordan_failures));
    put("bvcheck_step_identity_failures", static_cast<double>(step_identity_failures));
    put("bvcheck_step_records_with_gap", static_cast<double>(with_gap));
    put("bvcheck_step_nonzero_failures", static_cast<double>(step_nonzero_failures));
    return rep;
}

} // namespace fracpath::experiments
