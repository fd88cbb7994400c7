#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracpath/csv.hpp"
#include "fracpath/experiments.hpp"
#include "fracpath/fraccalc.hpp"
#include "support/stats.hpp"

using namespace fracpath;
using experiments::McPlan;
using experiments::ReportRow;

namespace {

const ReportRow* find_row(const experiments::ExperimentReport& rep, const std::string& name,
                          std::size_t grid) {
    for (const auto& r : rep.rows)
        if (r.experiment == name && r.grid == grid) return &r;
    return nullptr;
}

std::vector<const ReportRow*> find_rows(const experiments::ExperimentReport& rep,
                                        const std::string& name) {
    std::vector<const ReportRow*> out;
    for (const auto& r : rep.rows)
        if (r.experiment == name) out.push_back(&r);
    return out;
}

} // namespace

TEST_CASE("plan validation") {
    McPlan p;
    p.grids = {};
    CHECK_THROWS_AS(experiments::validate(p), std::invalid_argument);
    p.grids = {100};
    CHECK_THROWS_AS(experiments::validate(p), std::invalid_argument); // not a power of two
    p.grids = {256, 128};
    CHECK_THROWS_AS(experiments::validate(p), std::invalid_argument); // not increasing
    p.grids = {128, 256};
    p.replicas = 0;
    CHECK_THROWS_AS(experiments::validate(p), std::invalid_argument);
    p.replicas = 10;
    p.hurst = 1.0;
    CHECK_THROWS_AS(experiments::validate(p), std::invalid_argument);
    p.hurst = 0.5;
    CHECK_NOTHROW(experiments::validate(p));
}

TEST_CASE("mean_se and fit_loglog on known data") {
    const auto ms = experiments::mean_se({1.0, 2.0, 3.0, 4.0});
    CHECK(ms.mean == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(ms.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-14));

    // exact power law y = 8 n^{-1/2}: slope recovered exactly, zero residual
    const auto fit = experiments::fit_loglog({256.0, 1024.0, 4096.0},
                                             {0.5, 0.25, 0.125});
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.slope_err == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("normal cdf values and symmetry") {
    CHECK(experiments::normal_cdf(0.0) == 0.5);
    CHECK(experiments::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    for (double x : {0.1, 0.7, 1.3, 2.9}) {
        CHECK(experiments::normal_cdf(-x) ==
              doctest::Approx(1.0 - experiments::normal_cdf(x)).epsilon(1e-14));
    }
    CHECK(experiments::normal_cdf(-40.0) == 0.0);
    CHECK(experiments::normal_cdf(40.0) == 1.0);
}

TEST_CASE("clark-ocone integrand") {
    // gap 0: 2(1 - Phi(0)) = 1
    CHECK(experiments::clark_ocone_integrand(1.0, 1.0, 0.5, 1.0) == doctest::Approx(1.0));
    // enormous gap: probability of a new record vanishes
    CHECK(experiments::clark_ocone_integrand(50.0, 0.0, 0.5, 1.0) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // closed value: gap 1 at tau = T - t = 1 -> 2(1 - Phi(1))
    const double want = 2.0 * (1.0 - experiments::normal_cdf(1.0));
    CHECK(experiments::clark_ocone_integrand(1.0, 0.0, 0.0, 1.0) ==
          doctest::Approx(want).epsilon(1e-14));
    CHECK_THROWS_AS(experiments::clark_ocone_integrand(0.0, 1.0, 0.5, 1.0),
                    std::invalid_argument); // max below value
    CHECK_THROWS_AS(experiments::clark_ocone_integrand(1.0, 0.0, 1.0, 1.0),
                    std::invalid_argument); // t at the horizon
}

TEST_CASE("brownian path shape and determinism") {
    const SampledPath a = experiments::brownian_path(2.0, 64, 7, 3);
    const SampledPath b = experiments::brownian_path(2.0, 64, 7, 3);
    const SampledPath c = experiments::brownian_path(2.0, 64, 7, 4);
    REQUIRE(a.size() == 65);
    CHECK(a.values.front() == 0.0);
    CHECK(a.times.back() == 2.0);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
}

TEST_CASE("refined pair: coarse is the fine path subsampled") {
    const auto pair = experiments::sample_refined_pair(0.75, 1.0, 64, 16, 5, 0);
    REQUIRE(pair.fine.size() == 64 * 16 + 1);
    REQUIRE(pair.coarse.size() == 65);
    for (std::size_t i = 0; i < pair.coarse.size(); ++i) {
        CHECK(pair.coarse.times[i] == pair.fine.times[16 * i]);
        CHECK(pair.coarse.values[i] == pair.fine.values[16 * i]);
    }
}

TEST_CASE("quadratic variation of a deterministic line") {
    SampledPath p;
    const std::size_t n = 64;
    p.times = uniform_grid(1.0, n);
    p.values = p.times; // f(t) = t
    CHECK(experiments::quadratic_variation(p) ==
          doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-14));
}

TEST_CASE("change of variables for g(x) = x^2 equals the quadratic variation") {
    // b^2 - a^2 - 2a(b-a) = (b-a)^2 cell by cell, so the residual telescopes
    // to exactly the QV
    const SampledPath p = experiments::brownian_path(1.0, 512, 99, 0);
    const double resid = experiments::change_of_variables_residual(p, experiments::CovG::square);
    const double qv = experiments::quadratic_variation(p);
    CHECK(resid == doctest::Approx(qv).epsilon(1e-12));
}

TEST_CASE("change of variables for |x| shrinks under refinement") {
    // |B_T| - sum sign(B) dB -> local time; the forward-sum residual at fixed T
    // is positive and grows no faster than the grid allows; here we only check
    // it is finite and nonnegative up to quadrature noise on a real path
    const SampledPath coarse = experiments::brownian_path(1.0, 256, 4, 1);
    const SampledPath fine = experiments::brownian_path(1.0, 4096, 4, 1);
    const double rc = experiments::change_of_variables_residual(coarse, experiments::CovG::abs_value);
    const double rf = experiments::change_of_variables_residual(fine, experiments::CovG::abs_value);
    CHECK(std::isfinite(rc));
    CHECK(std::isfinite(rf));
    // local-time limit is nonnegative; tolerate small negative MC noise
    CHECK(rf > -0.5);
}

TEST_CASE("record indicator sum: monotone path telescopes exactly") {
    SampledPath p;
    p.times = uniform_grid(1.0, 16);
    p.values.resize(17);
    for (int i = 0; i <= 16; ++i) p.values[i] = static_cast<double>(i * i) / 256.0;
    const double drs =
        experiments::record_indicator_sum(p, experiments::RecordMode::discrete_record);
    CHECK(drs == doctest::Approx(p.values.back() - p.values.front()).epsilon(1e-15));
    CHECK(experiments::record_occupation(p, 0.0) == 1.0);
}

TEST_CASE("record indicator sum dominates the max increment on random paths") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const SampledPath p = experiments::brownian_path(1.0, 256, 11, s);
        const double drs =
            experiments::record_indicator_sum(p, experiments::RecordMode::discrete_record);
        const auto m = prefix_max(p.values);
        CHECK(drs >= m.back() - p.values.front() - 1e-13);
    }
}

TEST_CASE("record occupation bounds and monotonicity in eps") {
    const SampledPath p = experiments::brownian_path(1.0, 512, 13, 2);
    const double o0 = experiments::record_occupation(p, 0.0);
    const double o1 = experiments::record_occupation(p, 0.1);
    const double o2 = experiments::record_occupation(p, 10.0);
    CHECK(o0 > 0.0);
    CHECK(o0 <= o1);
    CHECK(o1 <= o2);
    CHECK(o2 == 1.0);
}

TEST_CASE("record indicator grid function against a refined reference") {
    // constructed pair: the fine path spikes to 10 early, so every coarse
    // point sits far below the reference running max and the indicator is 0
    SampledPath fine;
    fine.times = uniform_grid(1.0, 4);
    fine.values = {0.0, 10.0, 0.1, 0.2, 0.3};
    SampledPath coarse;
    coarse.times = uniform_grid(1.0, 2);
    coarse.values = {0.0, 0.1, 0.3};
    const fraccalc::GridFn ind = experiments::record_indicator_fn(coarse, fine, 0.5);
    REQUIRE(ind.size() == 3);
    CHECK(ind.values[0] == 0.0);
    CHECK(ind.values[1] == 0.0);
    CHECK(ind.values[2] == 0.0);
    CHECK(fraccalc::besov_norm_w2(ind, {0.3, 8}) == 0.0);

    // with a huge band every point is inside; the origin stays forced to 0
    const fraccalc::GridFn all = experiments::record_indicator_fn(coarse, fine, 100.0);
    CHECK(all.values[0] == 0.0);
    CHECK(all.values[1] == 1.0);
    CHECK(all.values[2] == 1.0);
}

TEST_CASE("record indicator grid function against the path's own max") {
    SampledPath p;
    p.times = uniform_grid(1.0, 4);
    p.values = {0.0, 1.0, 0.5, 2.0, 1.9};
    const fraccalc::GridFn ind = experiments::record_indicator_fn(p, 0.25);
    // gaps to the running max: 0, 0, 0.5, 0, 0.1
    CHECK(ind.values[0] == 0.0); // origin forced to 0
    CHECK(ind.values[1] == 1.0);
    CHECK(ind.values[2] == 0.0);
    CHECK(ind.values[3] == 1.0);
    CHECK(ind.values[4] == 1.0);
}

TEST_CASE("eps-band record sum matches a direct evaluation") {
    const auto pair = experiments::sample_refined_pair(0.75, 1.0, 128, 16, 21, 3);
    const double eps = 0.05;
    const auto ind = experiments::record_indicator_fn(pair.coarse, pair.fine, eps);
    double direct = 0.0;
    for (std::size_t i = 1; i < pair.coarse.size(); ++i)
        if (ind.values[i] == 1.0)
            direct += pair.coarse.values[i] - pair.coarse.values[i - 1];
    const double via_sum = experiments::record_indicator_sum(pair.coarse, pair.fine, eps);
    CHECK(via_sum == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("gls indicator experiment: validation") {
    const auto pair = experiments::sample_refined_pair(0.75, 1.0, 64, 16, 3, 0);
    CHECK_THROWS_AS(
        experiments::gls_indicator_experiment(pair, 0.5, {0.375, 64}, {0.1}),
        std::invalid_argument); // needs hurst > 1/2
    CHECK_THROWS_AS(
        experiments::gls_indicator_experiment(pair, 0.75, {0.2, 64}, {0.1}),
        std::invalid_argument); // beta below 1 - hurst
    CHECK_THROWS_AS(
        experiments::gls_indicator_experiment(pair, 0.75, {0.55, 64}, {0.1}),
        std::invalid_argument); // beta above 1/2
    CHECK_THROWS_AS(
        experiments::gls_indicator_experiment(pair, 0.75, {0.375, 64}, {}),
        std::invalid_argument); // empty schedule
}

TEST_CASE("gls indicator experiment: report shape and bound") {
    const auto pair = experiments::sample_refined_pair(0.75, 1.0, 256, 16, 12, 1);
    const std::vector<double> eps = {0.2, 0.05};
    const auto rep = experiments::gls_indicator_experiment(pair, 0.75, {0.375, 256}, eps);
    const auto w2 = find_rows(rep, "indicator_w2");
    const auto gls = find_rows(rep, "indicator_gls");
    const auto bound = find_rows(rep, "indicator_bound");
    REQUIRE(w2.size() == 2);
    REQUIRE(gls.size() == 2);
    REQUIRE(bound.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(w2[k]->eps == eps[k]);
        CHECK(w2[k]->estimate >= 0.0);
        CHECK(std::isfinite(gls[k]->estimate));
        // the indicator_bound row carries the norm-product bound itself,
        // which must dominate the integral
        CHECK(bound[k]->estimate >= std::fabs(gls[k]->estimate));
    }
}

TEST_CASE("positive max check matches the two-point orthant probability") {
    // finest grid 16 -> the max is over the first 2 grid points; for Brownian
    // motion P(B_1 <= 0, B_2 <= 0) = 1/4 + asin(1/sqrt 2)/(2 pi) = 0.375
    McPlan plan;
    plan.hurst = 0.5;
    plan.horizon = 1.0;
    plan.grids = {16};
    plan.replicas = 20000;
    plan.base_seed = 31;
    const double frac = experiments::positive_max_check(plan);
    const double se = std::sqrt(0.375 * 0.625 / 20000.0);
    CHECK(std::fabs(frac - 0.375) < 4.0 * se);
}

TEST_CASE("qv study: Brownian level and fBm slope") {
    McPlan plan;
    plan.hurst = 0.5;
    plan.horizon = 1.0;
    plan.grids = {64, 256};
    plan.replicas = 400;
    plan.base_seed = 8;
    const auto rep = experiments::run_qv_study(plan);
    for (std::size_t g : plan.grids) {
        const auto* row = find_row(rep, "qv_mean", g);
        REQUIRE(row != nullptr);
        // E[QV] = T for Brownian motion at any n
        CHECK(std::fabs(row->estimate - 1.0) < 6.0 * row->std_err);
    }
    const auto* slope = find_row(rep, "qv_slope", 0);
    REQUIRE(slope != nullptr);
    CHECK(std::fabs(slope->slope - 0.0) < 0.05);

    McPlan rough = plan;
    rough.hurst = 0.75;
    rough.grids = {256, 1024};
    rough.replicas = 100;
    const auto rep2 = experiments::run_qv_study(rough);
    const auto* slope2 = find_row(rep2, "qv_slope", 0);
    REQUIRE(slope2 != nullptr);
    // QV of fBm scales like n^{1-2H} = n^{-1/2}
    CHECK(slope2->slope == doctest::Approx(-0.5).epsilon(0.15));
}

TEST_CASE("maxrep requires Brownian hurst") {
    McPlan plan;
    plan.hurst = 0.75;
    plan.grids = {64};
    plan.replicas = 10;
    CHECK_THROWS_AS(experiments::mc_max_representation(plan), std::invalid_argument);
}

TEST_CASE("maxrep pilot: estimate near the analytic value, residual shrinking") {
    McPlan plan;
    plan.hurst = 0.5;
    plan.horizon = 1.0;
    plan.grids = {64, 256};
    plan.replicas = 4000;
    plan.base_seed = 77;
    const auto rep = experiments::mc_max_representation(plan);
    const auto* est64 = find_row(rep, "maxrep_estimate", 64);
    const auto* est256 = find_row(rep, "maxrep_estimate", 256);
    const auto* rms64 = find_row(rep, "maxrep_residual_rms", 64);
    const auto* rms256 = find_row(rep, "maxrep_residual_rms", 256);
    REQUIRE(est64 != nullptr);
    REQUIRE(est256 != nullptr);
    REQUIRE(rms64 != nullptr);
    REQUIRE(rms256 != nullptr);
    // discrete-max bias: E max_n = sqrt(2/pi) - 0.5826 sqrt(T/n) + o(...)
    const double target = std::sqrt(2.0 / M_PI);
    CHECK(std::fabs(est64->estimate - (target - 0.5826 / 8.0)) < 6.0 * est64->std_err + 0.01);
    CHECK(est256->estimate > est64->estimate);
    CHECK(std::fabs(est256->estimate - target) < 0.05);
    // Riemann-sum residual decays ~ n^{-1/2}
    CHECK(rms256->estimate < 0.65 * rms64->estimate);
}

TEST_CASE("bvcheck corpus battery reports exact identities") {
    const auto rep = experiments::run_bvcheck(2026, 200);
    const auto* pl = find_row(rep, "bvcheck_pl_resid_norm_max", 200);
    const auto* ac = find_row(rep, "bvcheck_ac_diff_norm_max", 200);
    const auto* jd = find_row(rep, "bvcheck_jordan_failures", 200);
    const auto* st = find_row(rep, "bvcheck_step_identity_failures", 200);
    const auto* gap = find_row(rep, "bvcheck_step_records_with_gap", 200);
    REQUIRE(pl != nullptr);
    REQUIRE(ac != nullptr);
    REQUIRE(jd != nullptr);
    REQUIRE(st != nullptr);
    REQUIRE(gap != nullptr);
    CHECK(pl->estimate <= 1e-12);
    CHECK(ac->estimate <= 1e-12);
    CHECK(jd->estimate == 0.0);
    CHECK(st->estimate == 0.0);
    // the corpus really exercises the jump counterexample
    CHECK(gap->estimate > 0.0);
}

TEST_CASE("failure battery smoke: shapes, violations, bound") {
    McPlan plan;
    plan.hurst = 0.75;
    plan.horizon = 1.0;
    plan.grids = {64, 128};
    plan.replicas = 40;
    plan.base_seed = 3;
    const std::vector<double> eps_factors = {1e-2, 1e-3};
    const auto rep = experiments::run_failure_battery(plan, 0.375, eps_factors, 4);

    for (std::size_t g : plan.grids) {
        const auto* occ = find_row(rep, "occupation_eps0", g);
        REQUIRE(occ != nullptr);
        CHECK(occ->estimate > 0.0);
        CHECK(occ->estimate < 1.0);
        const auto* drm = find_row(rep, "discrete_record_mean", g);
        REQUIRE(drm != nullptr);
        CHECK(drm->estimate > 0.0);
    }
    const auto* vio = find_row(rep, "record_violations", 0);
    REQUIRE(vio != nullptr);
    CHECK(vio->estimate == 0.0);
    // occupation of exact records thins out as the grid refines
    CHECK(find_row(rep, "occupation_eps0", 128)->estimate <
          find_row(rep, "occupation_eps0", 64)->estimate);

    const auto band = find_rows(rep, "eps_band_abs_sum");
    REQUIRE(band.size() == eps_factors.size());
    for (const auto* r : band) CHECK(r->estimate >= 0.0);

    const auto w2 = find_rows(rep, "indicator_w2");
    REQUIRE(w2.size() == eps_factors.size());
    for (const auto* r : w2) CHECK(std::isfinite(r->estimate));

    const auto ok = find_rows(rep, "indicator_bound_ok");
    REQUIRE(ok.size() == eps_factors.size());
    for (const auto* r : ok) CHECK(r->estimate == 1.0);
}

TEST_CASE("reports are identical for any worker count") {
    McPlan plan;
    plan.hurst = 0.75;
    plan.horizon = 1.0;
    plan.grids = {64, 128};
    plan.replicas = 60;
    plan.base_seed = 19;

    setenv("FRACPATH_THREADS", "1", 1);
    const auto rep1 = experiments::run_qv_study(plan);
    setenv("FRACPATH_THREADS", "4", 1);
    const auto rep4 = experiments::run_qv_study(plan);
    unsetenv("FRACPATH_THREADS");

    REQUIRE(rep1.rows.size() == rep4.rows.size());
    // bitwise agreement: compensated sums are accumulated in replica order;
    // NaN marks an inapplicable field on both sides
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    for (std::size_t i = 0; i < rep1.rows.size(); ++i) {
        CHECK(rep1.rows[i].experiment == rep4.rows[i].experiment);
        CHECK(rep1.rows[i].grid == rep4.rows[i].grid);
        CHECK(same(rep1.rows[i].estimate, rep4.rows[i].estimate));
        CHECK(same(rep1.rows[i].std_err, rep4.rows[i].std_err));
        CHECK(same(rep1.rows[i].slope, rep4.rows[i].slope));
    }
}

TEST_CASE("csv: format_double round-trips bitwise") {
    for (double v : {0.1, 1.0 / 3.0, 2.417e-5, 123456.789, -0.0, 1e300}) {
        const std::string s = csv::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(csv::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("csv: report writer renders NaN as empty cells") {
    experiments::ExperimentReport rep;
    ReportRow row;
    row.experiment = "demo";
    row.grid = 128;
    row.estimate = 0.5;
    row.std_err = 0.25;
    rep.rows.push_back(row);
    ReportRow agg;
    agg.experiment = "demo_slope";
    agg.grid = 0;
    agg.slope = -0.5;
    agg.slope_err = 0.01;
    rep.rows.push_back(agg);

    std::ostringstream os;
    csv::write_report(os, rep, {"subcommand=demo", "seed=1"});
    const std::string text = os.str();
    CHECK(text ==
          "# subcommand=demo\n"
          "# seed=1\n"
          "experiment,grid,eps,estimate,std_err,slope,slope_err\n"
          "demo,128,,0.5,0.25,,\n"
          "demo_slope,0,,,,-0.5,0.01\n");
}

TEST_CASE("csv: path and step writers") {
    SampledPath p;
    p.times = {0.0, 0.5, 1.0};
    p.values = {0.0, 1.5, -0.25};
    std::ostringstream os;
    csv::write_path(os, p);
    CHECK(os.str() == "t,value\n0,0\n0.5,1.5\n1,-0.25\n");

    bv::StepFn f(2.0, {{0.5, 1.0}}, 1.0);
    std::ostringstream os2;
    csv::write_step(os2, f);
    CHECK(os2.str() == "# initial=2\n# horizon=1\nt,jump\n0.5,1\n");
}
