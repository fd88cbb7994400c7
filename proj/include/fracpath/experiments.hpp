#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fracpath/bv.hpp"
#include "fracpath/fraccalc.hpp"
#include "fracpath/path.hpp"
#include "fracpath/rng.hpp"

// Monte Carlo experiments around the running maximum: the Brownian max
// representation (exact integrand), quadratic-variation scaling, pathwise
// change-of-variables residuals, and the record-indicator integral that the
// representation theory says cannot survive refinement for H > 1/2. Replicas
// use disjoint counter-based streams and are aggregated with compensated
// summation in replica order, so reports are identical for any worker count.

namespace fracpath::experiments {

struct McPlan {
    std::size_t replicas = 1000;
    std::uint64_t base_seed = 42;
    std::vector<std::size_t> grids; // strictly increasing powers of two
    double hurst = 0.75;
    double horizon = 1.0;
};

void validate(const McPlan& plan);

// Report rows mirror the CSV schema; NaN marks an inapplicable field and is
// rendered as an empty CSV cell. grid = 0 marks an aggregate row.
struct ReportRow {
    static constexpr double na = std::numeric_limits<double>::quiet_NaN();
    std::string experiment;
    std::size_t grid = 0;
    double eps = na;
    double estimate = na;
    double std_err = na;
    double slope = na;
    double slope_err = na;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
};

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};
MeanSe mean_se(const std::vector<double>& xs);

struct SlopeFit {
    double slope = 0.0;
    double slope_err = 0.0;
};
// least-squares slope of log(y) against log(n)
SlopeFit fit_loglog(const std::vector<double>& n, const std::vector<double>& y);

double normal_cdf(double x);

// Clark-Ocone integrand 2(1 - Phi((S_t - W_t)/sqrt(T - t))); requires t < horizon
double clark_ocone_integrand(double running_max, double value, double t, double horizon);

// E(S_T) = sqrt(2T/pi) study: per grid, the mean discrete max, its distance to
// the analytic value, and the RMS of the Clark-Ocone residual
//   S_T - sqrt(2T/pi) - sum_i h(t_{i-1}) dW_i.
ExperimentReport mc_max_representation(const McPlan& plan);

double quadratic_variation(const SampledPath& path);

enum class CovG { square, abs_value };
// |g(B_T) - g(B_0) - sum_i g'(B_{t_{i-1}}) dB_i| with g'(x) = 2x, or sign(x)
// with the left derivative -1 at 0 for the absolute-value case
double change_of_variables_residual(const SampledPath& path, CovG g);

enum class RecordMode { discrete_record, eps_band };
// sum_i 1{record at t_i} (B_{t_i} - B_{t_{i-1}}); discrete_record compares
// against the on-grid running max, eps_band against an eps-neighborhood of it
double record_indicator_sum(const SampledPath& path, RecordMode mode, double eps = 0.0);
// eps_band against the running max of a refined reference path (its grid must
// be an integer refinement of the path's grid, same horizon)
double record_indicator_sum(const SampledPath& path, const SampledPath& reference, double eps);

// fraction of grid points with M_t - B_t <= eps (same-grid running max)
double record_occupation(const SampledPath& path, double eps);

// one coarse path plus the refined draw it was subsampled from (shared
// randomness); the refined path supplies the reference running max
struct RefinedPair {
    SampledPath fine;
    SampledPath coarse;
};

// eps-band record indicator as a grid function (values 0/1; the origin is
// forced to 0 so the indicator is a valid Weyl-derivative input). The first
// overload bands against the path's own running max, the second against the
// running max of a refined reference path.
fraccalc::GridFn record_indicator_fn(const SampledPath& path, double eps);
fraccalc::GridFn record_indicator_fn(const SampledPath& path, const SampledPath& reference,
                                     double eps);

// Indicator probe: ||indicator||_{2,beta}, the GLS integral of the indicator
// against the path, and the norm-product bound, per eps. The indicator bands
// pair.coarse against pair.fine's running max (a same-grid max would pin the
// on-grid argmax inside every band, so the indicator could never empty).
// Requires hurst > 1/2 and beta in (1-hurst, 1/2).
ExperimentReport gls_indicator_experiment(const RefinedPair& pair, double hurst,
                                          const fraccalc::FracParams& params,
                                          const std::vector<double>& eps_list);

// fraction of replicas whose discrete running max at t = horizon/10 is <= 0,
// on the finest grid of the plan (max over indices 1..max(1, round(n/10)))
double positive_max_check(const McPlan& plan);

// experiment batteries (drive the CLI subcommands)
ExperimentReport run_qv_study(const McPlan& plan);
ExperimentReport run_maxrep(const McPlan& plan);
ExperimentReport run_failure_battery(const McPlan& plan, double beta,
                                     const std::vector<double>& eps_factors,
                                     std::size_t norm_replicas);
ExperimentReport run_bvcheck(std::uint64_t seed, std::size_t corpus_size);

// dyadic-valued random corpora (values on the lattice k/2^30, so variation
// sums and record telescoping are exact in double precision)
bv::PiecewiseLinearFn random_pl_fn(Philox& rng);
bv::StepFn random_step_fn(Philox& rng);

// internal sampler helpers, exposed for tests: exact Brownian fast path and
// a coarse path subsampled from one refined draw
SampledPath brownian_path(double horizon, std::size_t steps, std::uint64_t seed,
                          std::uint64_t stream);
RefinedPair sample_refined_pair(double hurst, double horizon, std::size_t steps,
                                std::size_t refine, std::uint64_t seed, std::uint64_t stream);

} // namespace fracpath::experiments
