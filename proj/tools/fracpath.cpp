// fracpath command-line driver.
//
// Subcommands: fbm, qv, maxrep, bvcheck, gls, failure.  All numeric options
// live on the main app and fall through from the subcommands, so the same
// keys work on the command line (--hurst 0.6), after the subcommand
// (fracpath qv --hurst 0.6), or in a plain key=value config file passed with
// --config (command-line flags override file values).
//
// Exit codes: 0 success, 1 numeric failure during a run, 2 configuration
// error (unknown key or out-of-range value; the message names the key and
// the valid range).

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracpath/bv.hpp"
#include "fracpath/csv.hpp"
#include "fracpath/experiments.hpp"
#include "fracpath/fbm.hpp"
#include "fracpath/fft.hpp"
#include "fracpath/fraccalc.hpp"
#include "fracpath/path.hpp"

namespace {

using fracpath::SampledPath;
namespace fbm = fracpath::fbm;
namespace fraccalc = fracpath::fraccalc;
namespace experiments = fracpath::experiments;
namespace csv = fracpath::csv;

struct Options {
    double hurst = 0.75;
    double horizon = 1.0;
    double beta = std::numeric_limits<double>::quiet_NaN(); // NaN -> midpoint of (1-H, 1/2)
    std::size_t steps = 1024;
    std::vector<std::size_t> grids{256, 1024, 4096};
    std::size_t replicas = 0; // 0 -> per-subcommand default
    std::uint64_t seed = 42;
    std::vector<double> eps{1e-3, 1e-4, 1e-5};
    std::string method = "circulant";
    std::string out;
    std::size_t corpus = 1000;
    std::size_t norm_replicas = 48;
    std::string pair = "poly";
};

[[noreturn]] void config_error(const std::string& msg) {
    std::cerr << "config error: " << msg << '\n';
    std::exit(2);
}

std::string join_sizes(const std::vector<std::size_t>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(xs[i]);
    }
    return s;
}

std::string join_doubles(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += csv::format_double(xs[i]);
    }
    return s;
}

std::string fmt(double v) { return csv::format_double(v); }

fbm::Method parse_method(const std::string& m) {
    if (m == "cholesky") return fbm::Method::cholesky;
    if (m == "circulant") return fbm::Method::circulant;
    config_error("method must be one of {cholesky, circulant}, got '" + m + "'");
}

void check_common(const Options& o) {
    if (!(o.hurst > 0.0 && o.hurst < 1.0))
        config_error("hurst must lie in (0,1), got " + fmt(o.hurst));
    if (!(o.horizon > 0.0))
        config_error("horizon must be positive, got " + fmt(o.horizon));
    if (o.steps < 1) config_error("steps must be >= 1");
}

void check_grids(const std::vector<std::size_t>& grids) {
    if (grids.empty()) config_error("grids must be a nonempty list");
    std::size_t prev = 0;
    for (std::size_t g : grids) {
        if (!fracpath::is_pow2(g))
            config_error("grids entries must be powers of two, got " + std::to_string(g));
        if (g <= prev) config_error("grids must be strictly increasing");
        prev = g;
    }
}

void check_beta_window(double beta, double hurst) {
    if (!(beta > 1.0 - hurst && beta < 0.5))
        config_error("beta must lie in (1-hurst, 1/2) = (" + fmt(1.0 - hurst) + ",0.5), got " +
                     fmt(beta));
}

std::vector<std::string> base_comments(const char* sub, const Options& o) {
    std::vector<std::string> c;
    c.push_back(std::string("subcommand=") + sub);
    c.push_back("hurst=" + fmt(o.hurst));
    c.push_back("horizon=" + fmt(o.horizon));
    c.push_back("seed=" + std::to_string(o.seed));
    return c;
}

// --- subcommand runners ----------------------------------------------------

int run_fbm(const Options& o) {
    fbm::FbmConfig cfg;
    cfg.hurst = o.hurst;
    cfg.horizon = o.horizon;
    cfg.steps = o.steps;
    cfg.seed = o.seed;
    cfg.method = parse_method(o.method);
    if (cfg.method == fbm::Method::cholesky && o.steps > fbm::kCholeskyMaxSteps)
        config_error("steps must be <= " + std::to_string(fbm::kCholeskyMaxSteps) +
                     " with method=cholesky, got " + std::to_string(o.steps));
    const SampledPath path = fbm::sample_fbm(cfg);
    std::vector<std::string> c = base_comments("fbm", o);
    c.push_back("steps=" + std::to_string(o.steps));
    c.push_back("method=" + o.method);
    std::ostringstream ss;
    csv::write_path(ss, path, c);
    csv::save(o.out, ss.str());
    std::cout << "fbm: steps=" << o.steps << " hurst=" << fmt(o.hurst) << " method=" << o.method
              << " B_T=" << fmt(path.values.back()) << " -> " << o.out << '\n';
    return 0;
}

int run_qv(const Options& o, std::size_t replicas) {
    experiments::McPlan plan{replicas, o.seed, o.grids, o.hurst, o.horizon};
    const experiments::ExperimentReport rep = experiments::run_qv_study(plan);
    std::vector<std::string> c = base_comments("qv", o);
    c.push_back("grids=" + join_sizes(o.grids));
    c.push_back("replicas=" + std::to_string(replicas));
    std::ostringstream ss;
    csv::write_report(ss, rep, c);
    csv::save(o.out, ss.str());
    double slope = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rep.rows)
        if (r.experiment == "qv_slope") slope = r.slope;
    std::cout << "qv: slope=" << fmt(slope) << " (target 1-2H=" << fmt(1.0 - 2.0 * o.hurst)
              << ") grids=" << o.grids.size() << " replicas=" << replicas << " -> " << o.out
              << '\n';
    return 0;
}

int run_maxrep(const Options& o, std::size_t replicas, const std::vector<std::size_t>& grids) {
    experiments::McPlan plan{replicas, o.seed, grids, 0.5, o.horizon};
    const experiments::ExperimentReport rep = experiments::run_maxrep(plan);
    Options oc = o;
    oc.hurst = 0.5;
    std::vector<std::string> c = base_comments("maxrep", oc);
    c.push_back("grids=" + join_sizes(grids));
    c.push_back("replicas=" + std::to_string(replicas));
    std::ostringstream ss;
    csv::write_report(ss, rep, c);
    csv::save(o.out, ss.str());
    const double target = std::sqrt(2.0 * o.horizon / M_PI);
    double est = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rep.rows)
        if (r.experiment == "maxrep_estimate" && r.grid == grids.back()) est = r.estimate;
    std::cout << "maxrep: E[S_T]=" << fmt(est) << " at n=" << grids.back()
              << " (continuum sqrt(2T/pi)=" << fmt(target) << ") replicas=" << replicas << " -> "
              << o.out << '\n';
    return 0;
}

int run_bvcheck(const Options& o) {
    if (o.corpus < 1) config_error("corpus must be >= 1");
    const experiments::ExperimentReport rep = experiments::run_bvcheck(o.seed, o.corpus);
    std::vector<std::string> c;
    c.push_back("subcommand=bvcheck");
    c.push_back("corpus=" + std::to_string(o.corpus));
    c.push_back("seed=" + std::to_string(o.seed));
    std::ostringstream ss;
    csv::write_report(ss, rep, c);
    csv::save(o.out, ss.str());
    auto get = [&](const char* name) {
        for (const auto& r : rep.rows)
            if (r.experiment == name) return r.estimate;
        return std::numeric_limits<double>::quiet_NaN();
    };
    const double resid = get("bvcheck_pl_resid_norm_max");
    std::cout << "bvcheck: corpus=" << o.corpus << " max|f*(T)-f(0)-integral|/(1+TV)="
              << fmt(resid) << (resid <= 1e-12 ? " (<= 1e-12)" : " (EXCEEDS 1e-12)")
              << " jordan_failures=" << fmt(get("bvcheck_jordan_failures"))
              << " step_identity_failures=" << fmt(get("bvcheck_step_identity_failures")) << " -> "
              << o.out << '\n';
    return get("bvcheck_jordan_failures") == 0.0 && get("bvcheck_step_identity_failures") == 0.0 &&
                   resid <= 1e-12
               ? 0
               : 1;
}

int run_gls(const Options& o) {
    fraccalc::GridFn f, g;
    if (o.pair == "poly") {
        if (!(o.beta > 0.0 && o.beta < 1.0))
            config_error("beta must lie in (0,1) for pair=poly, got " + fmt(o.beta));
        f = fraccalc::make_gridfn(o.horizon, o.steps, [](double x) { return x * x; });
        g = fraccalc::make_gridfn(o.horizon, o.steps, [](double x) { return x * x * x; });
    } else if (o.pair == "fbm") {
        if (!(o.hurst > 0.5))
            config_error("pair=fbm requires hurst in (1/2,1), got " + fmt(o.hurst));
        check_beta_window(o.beta, o.hurst);
        fbm::FbmConfig cfg;
        cfg.hurst = o.hurst;
        cfg.horizon = o.horizon;
        cfg.steps = o.steps;
        cfg.seed = o.seed;
        cfg.method = parse_method(o.method);
        if (cfg.method == fbm::Method::cholesky && o.steps > fbm::kCholeskyMaxSteps)
            config_error("steps must be <= " + std::to_string(fbm::kCholeskyMaxSteps) +
                         " with method=cholesky, got " + std::to_string(o.steps));
        f = fraccalc::to_gridfn(fracpath::fbm::sample_fbm(cfg, 0));
        g = fraccalc::to_gridfn(fracpath::fbm::sample_fbm(cfg, 1));
    } else {
        config_error("pair must be one of {poly, fbm}, got '" + o.pair + "'");
    }
    const fraccalc::FracParams params{o.beta, o.steps + 1};
    const double integral = fraccalc::gls_integral(f, g, params, o.horizon);
    const fraccalc::BoundCheck bound = fraccalc::gls_bound_check(f, g, params, o.horizon);

    experiments::ExperimentReport rep;
    const double na = experiments::ReportRow::na;
    rep.rows.push_back({"gls_integral", o.steps, na, integral, na, na, na});
    rep.rows.push_back({"gls_bound_lhs", o.steps, na, bound.lhs, na, na, na});
    rep.rows.push_back({"gls_bound_rhs", o.steps, na, bound.rhs, na, na, na});
    rep.rows.push_back({"gls_bound_holds", o.steps, na, bound.holds ? 1.0 : 0.0, na, na, na});
    std::vector<std::string> c = base_comments("gls", o);
    c.push_back("beta=" + fmt(o.beta));
    c.push_back("steps=" + std::to_string(o.steps));
    c.push_back("pair=" + o.pair);
    if (o.pair == "fbm") c.push_back("method=" + o.method);
    std::ostringstream ss;
    csv::write_report(ss, rep, c);
    csv::save(o.out, ss.str());
    std::cout << "gls: integral=" << fmt(integral) << " bound: " << fmt(bound.lhs)
              << (bound.holds ? " <= " : " > ") << fmt(bound.rhs)
              << (bound.holds ? " (holds)" : " (VIOLATED)") << " pair=" << o.pair << " -> "
              << o.out << '\n';
    return bound.holds ? 0 : 1;
}

bool decreasing(const std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] < xs[i - 1])) return false;
    return xs.size() >= 2;
}

int run_failure(const Options& o, std::size_t replicas) {
    if (!(o.hurst > 0.5))
        config_error("failure battery requires hurst in (1/2,1), got " + fmt(o.hurst));
    check_beta_window(o.beta, o.hurst);
    if (o.eps.empty()) config_error("eps must be a nonempty list");
    for (double e : o.eps)
        if (!(e > 0.0)) config_error("eps entries must be positive, got " + fmt(e));
    for (std::size_t i = 1; i < o.eps.size(); ++i)
        if (!(o.eps[i] < o.eps[i - 1]))
            config_error("eps must be strictly decreasing (a refinement schedule)");
    experiments::McPlan plan{replicas, o.seed, o.grids, o.hurst, o.horizon};
    const experiments::ExperimentReport rep =
        experiments::run_failure_battery(plan, o.beta, o.eps, o.norm_replicas);
    std::vector<std::string> c = base_comments("failure", o);
    c.push_back("beta=" + fmt(o.beta));
    c.push_back("grids=" + join_sizes(o.grids));
    c.push_back("replicas=" + std::to_string(replicas));
    c.push_back("norm_replicas=" + std::to_string(o.norm_replicas));
    c.push_back("eps=" + join_doubles(o.eps));
    std::ostringstream ss;
    csv::write_report(ss, rep, c);
    csv::save(o.out, ss.str());

    auto series = [&](const char* name) {
        std::vector<double> v;
        for (const auto& r : rep.rows)
            if (r.experiment == name) v.push_back(r.estimate);
        return v;
    };
    double violations = 0.0;
    for (const auto& r : rep.rows)
        if (r.experiment == "record_violations") violations = r.estimate;
    const bool occ_dec = decreasing(series("occupation_eps0"));
    const bool band_dec = decreasing(series("eps_band_abs_sum"));
    const bool w2_dec = decreasing(series("indicator_w2"));
    std::cout << "failure: record_violations=" << fmt(violations) << " decreasing{occupation="
              << (occ_dec ? "yes" : "no") << ",eps_band=" << (band_dec ? "yes" : "no")
              << ",indicator_w2=" << (w2_dec ? "yes" : "no") << "} -> " << o.out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"fracpath: exact fractional Brownian path sampling with bounded-variation and "
                 "fractional-calculus experiment batteries"};
    app.set_version_flag("--version", "fracpath 1.0.0");
    app.set_config("--config", "", "plain key=value config file; command-line flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    auto* o_hurst =
        app.add_option("--hurst", opt.hurst, "Hurst index in (0,1)")->capture_default_str();
    app.add_option("--horizon", opt.horizon, "time horizon T > 0")->capture_default_str();
    auto* o_beta = app.add_option(
        "--beta", opt.beta,
        "fractional order; default: midpoint of (1-hurst, 1/2) = (1.5-hurst)/2");
    auto* o_steps =
        app.add_option("--steps", opt.steps, "grid cells for fbm/gls; single grid for maxrep")
            ->capture_default_str();
    app.add_option("--grids", opt.grids,
                   "comma-separated power-of-two grid list for qv/maxrep/failure")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--replicas", opt.replicas,
                   "Monte Carlo replicas; default: qv 200, maxrep 10000, failure 200");
    app.add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    app.add_option("--eps", opt.eps,
                   "strictly decreasing epsilon schedule; failure: band half-widths as "
                   "fractions of each path's range (the default probes the regime where "
                   "the band empties; larger factors show the non-vanishing plateau)")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--method", opt.method, "sampler: cholesky | circulant")
        ->capture_default_str();
    app.add_option("--out", opt.out, "output CSV path; default: <subcommand>_report.csv "
                                     "(fbm: fbm_path.csv)");
    app.add_option("--corpus", opt.corpus, "bvcheck: number of random functions per corpus")
        ->capture_default_str();
    app.add_option("--norm-replicas", opt.norm_replicas,
                   "failure: replicas for the indicator-norm/GLS probe (0 = skip)")
        ->capture_default_str();
    app.add_option("--pair", opt.pair, "gls integrand pair: poly (x^2 d(x^3)) | fbm")
        ->capture_default_str();

    CLI::App* sub_fbm = app.add_subcommand("fbm", "sample one fBm path, write t,value CSV");
    CLI::App* sub_qv = app.add_subcommand("qv", "quadratic-variation slope study across grids");
    CLI::App* sub_maxrep =
        app.add_subcommand("maxrep", "Monte Carlo max representation E[S_T] (Brownian case)");
    CLI::App* sub_bvcheck =
        app.add_subcommand("bvcheck", "record-set identities on random PL/step corpora");
    CLI::App* sub_gls = app.add_subcommand("gls", "fractional integral and norm bound on a pair");
    CLI::App* sub_failure =
        app.add_subcommand("failure", "record indicator battery: band sums, occupation, norms");
    for (CLI::App* s : {sub_fbm, sub_qv, sub_maxrep, sub_bvcheck, sub_gls, sub_failure})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    if (std::isnan(opt.beta)) opt.beta = (1.5 - opt.hurst) / 2.0;
    if (opt.out.empty()) opt.out = sub == "fbm" ? "fbm_path.csv" : sub + "_report.csv";
    check_common(opt);
    if (o_beta->count() && !(opt.beta > 0.0 && opt.beta < 1.0))
        config_error("beta must lie in (0,1), got " + fmt(opt.beta));

    try {
        if (sub == "fbm") return run_fbm(opt);
        if (sub == "qv") {
            check_grids(opt.grids);
            return run_qv(opt, opt.replicas ? opt.replicas : 200);
        }
        if (sub == "maxrep") {
            if (o_hurst->count() && opt.hurst != 0.5)
                config_error("maxrep requires hurst=0.5 (Brownian Clark-Ocone case), got " +
                             fmt(opt.hurst));
            std::vector<std::size_t> grids =
                o_steps->count() ? std::vector<std::size_t>{opt.steps} : opt.grids;
            check_grids(grids);
            return run_maxrep(opt, opt.replicas ? opt.replicas : 10000, grids);
        }
        if (sub == "bvcheck") return run_bvcheck(opt);
        if (sub == "gls") return run_gls(opt);
        check_grids(opt.grids);
        return run_failure(opt, opt.replicas ? opt.replicas : 200);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
