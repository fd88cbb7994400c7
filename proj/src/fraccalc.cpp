#include "fracpath/fraccalc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracpath/kernels.hpp"
#include "fracpath/parallel.hpp"

namespace fracpath::fraccalc {

void validate(const FracParams& p) {
    if (!(p.beta > 0.0 && p.beta < 1.0))
        throw std::invalid_argument("fraccalc: beta must lie in (0,1), got " + std::to_string(p.beta));
    if (p.grid_points < 2)
        throw std::invalid_argument("fraccalc: grid_points must be at least 2");
}

void validate_grid(const GridFn& f) {
    if (f.times.size() < 2 || f.times.size() != f.values.size())
        throw std::invalid_argument("fraccalc: grid needs >= 2 points and equal lengths");
    if (f.times.front() != 0.0)
        throw std::invalid_argument("fraccalc: grid must start at 0");
    const double h = f.times[1] - f.times[0];
    if (!(h > 0.0)) throw std::invalid_argument("fraccalc: grid spacing must be positive");
    const double tol = 1e-9 * std::max(1.0, f.times.back());
    for (std::size_t i = 0; i < f.times.size(); ++i)
        if (std::fabs(f.times[i] - static_cast<double>(i) * h) > tol)
            throw std::invalid_argument("fraccalc: grid must be uniform");
}

GridFn make_gridfn(double horizon, std::size_t cells, const std::function<double(double)>& fn) {
    if (!(horizon > 0.0) || cells < 1)
        throw std::invalid_argument("make_gridfn: need horizon > 0 and cells >= 1");
    GridFn g;
    g.times = uniform_grid(horizon, cells);
    g.values.resize(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) g.values[i] = fn(g.times[i]);
    return g;
}

GridFn to_gridfn(const SampledPath& p) { return GridFn{p.times, p.values}; }

namespace {

std::size_t grid_index_of(const GridFn& f, double t) {
    const double h = f.times[1] - f.times[0];
    const long long k = std::llround(t / h);
    if (k < 1 || static_cast<std::size_t>(k) >= f.times.size() ||
        std::fabs(f.times[static_cast<std::size_t>(k)] - t) > 1e-12 * (1.0 + f.times.back()))
        throw std::invalid_argument("fraccalc: t must coincide with a grid point in (0, T]");
    return static_cast<std::size_t>(k);
}

GridFn prefix(const GridFn& f, std::size_t idx) {
    GridFn out;
    out.times.assign(f.times.begin(), f.times.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
    out.values.assign(f.values.begin(), f.values.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
    return out;
}

void warn_endpoint_once(const char* what) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
        std::fprintf(stderr,
                     "fracpath: %s; the boundary slot of the Weyl derivative is undefined "
                     "(further warnings suppressed)\n",
                     what);
}

// Product-integration tables for the Riemann-Liouville kernel (s-u)^{b-1}:
// P_k integrates the kernel over one cell at lag k, Q_k its first moment;
// B_k and C_k are the resulting hat-function weights.
struct RlTables {
    std::vector<double> B, C;
};

RlTables rl_tables(std::size_t n, double b) {
    std::vector<double> pb(n + 1), pb1(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        pb[k] = std::pow(kd, b);
        pb1[k] = std::pow(kd, b + 1.0);
    }
    RlTables t;
    t.B.assign(n + 1, 0.0);
    t.C.assign(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double P = (pb[k] - pb[k - 1]) / b;
        const double Q = (pb1[k] - pb1[k - 1]) / (b + 1.0);
        const double R = static_cast<double>(k) * P - Q;
        t.B[k] = R;
        t.C[k] = P - R;
    }
    return t;
}

} // namespace

GridFn rl_integral_left(const GridFn& f, const FracParams& params) {
    validate(params);
    validate_grid(f);
    const std::size_t n = f.size() - 1;
    const double b = params.beta;
    const double h = f.times[1] - f.times[0];
    const RlTables tb = rl_tables(n, b);
    const double scale = std::pow(h, b) / std::tgamma(b);

    GridFn out;
    out.times = f.times;
    out.values.assign(n + 1, 0.0);
    const double* fv = f.values.data();
    parallel_for(n, [&](std::size_t u) {
        const std::size_t i = u + 1;
        const double t1 = kernels::dot_rev(fv, tb.C.data() + 1, i);
        const double t2 = kernels::dot_rev(fv + 1, tb.B.data() + 1, i);
        out.values[i] = scale * (t1 + t2);
    });
    return out;
}

GridFn rl_integral_right(const GridFn& f, const FracParams& params, double t) {
    validate(params);
    validate_grid(f);
    const std::size_t m = grid_index_of(f, t);
    const GridFn ff = prefix(f, m);
    const double b = params.beta;
    const double h = ff.times[1] - ff.times[0];
    const RlTables tb = rl_tables(m, b);
    const double scale = std::pow(h, b) / std::tgamma(b);

    GridFn out;
    out.times = ff.times;
    out.values.assign(m + 1, 0.0);
    const double* fv = ff.values.data();
    parallel_for(m, [&](std::size_t i) {
        const double t1 = kernels::dot(fv + i, tb.B.data() + 1, m - i);
        const double t2 = kernels::dot(fv + i + 1, tb.C.data() + 1, m - i);
        out.values[i] = scale * (t1 + t2);
    });
    return out;
}

GridFn weyl_deriv_left(const GridFn& f, const FracParams& params) {
    validate(params);
    validate_grid(f);
    const std::size_t n = f.size() - 1;
    const double b = params.beta;
    const double h = f.times[1] - f.times[0];
    if (f.values.front() != 0.0) warn_endpoint_once("weyl_deriv_left called with f(0) != 0");

    // a_k integrates (x-y)^{-1-b} over the cell at lag k (k >= 2); the adjacent
    // cell (k = 1) is finite because f(x)-f(y) vanishes linearly at y = x.
    std::vector<double> a(n + 1, 0.0), r(n + 1, 0.0), cumA(n + 1, 0.0);
    {
        std::vector<double> pmb(n + 1, 0.0), p1m(n + 1, 0.0);
        for (std::size_t k = 1; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            pmb[k] = std::pow(kd, -b);
            p1m[k] = std::pow(kd, 1.0 - b);
        }
        for (std::size_t k = 2; k <= n; ++k) {
            a[k] = (pmb[k - 1] - pmb[k]) / b;
            const double q = (p1m[k] - p1m[k - 1]) / (1.0 - b);
            r[k] = static_cast<double>(k) * a[k] - q;
            cumA[k] = cumA[k - 1] + a[k];
        }
    }
    std::vector<double> df(n);
    for (std::size_t j = 0; j < n; ++j) df[j] = f.values[j + 1] - f.values[j];

    const double hmb = std::pow(h, -b);
    const double q1 = 1.0 / (1.0 - b);
    const double ginv = 1.0 / std::tgamma(1.0 - b);

    GridFn out;
    out.times = f.times;
    out.values.assign(n + 1, 0.0);
    out.values[0] =
        f.values[0] == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    const double* fv = f.values.data();
    parallel_for(n, [&](std::size_t u) {
        const std::size_t i = u + 1;
        double S = fv[i] * cumA[i];
        S -= kernels::dot_rev(fv, a.data() + 2, i - 1);
        S -= kernels::dot_rev(df.data(), r.data() + 2, i - 1);
        S += df[i - 1] * q1;
        S *= hmb;
        out.values[i] = ginv * (fv[i] * std::pow(f.times[i], -b) + b * S);
    });
    return out;
}

GridFn weyl_deriv_right(const GridFn& g, const FracParams& params, double t) {
    validate(params);
    validate_grid(g);
    const std::size_t m = grid_index_of(g, t);
    const GridFn gg = prefix(g, m);
    const double b = params.beta;
    const double h = gg.times[1] - gg.times[0];
    if (gg.values[m] != 0.0) warn_endpoint_once("weyl_deriv_right called with g(t) != 0");

    std::vector<double> pbar(m + 1, 0.0), rbar(m + 1, 0.0), cumP(m + 1, 0.0);
    {
        std::vector<double> pmb(m + 2, 0.0), p1m(m + 2, 0.0);
        for (std::size_t k = 1; k <= m + 1; ++k) {
            const double kd = static_cast<double>(k);
            pmb[k] = std::pow(kd, -b);
            p1m[k] = std::pow(kd, 1.0 - b);
        }
        for (std::size_t k = 1; k + 1 <= m; ++k) {
            pbar[k] = (pmb[k] - pmb[k + 1]) / b;
            const double qbar = (p1m[k + 1] - p1m[k]) / (1.0 - b);
            rbar[k] = qbar - static_cast<double>(k) * pbar[k];
            cumP[k] = cumP[k - 1] + pbar[k];
        }
    }
    std::vector<double> dg(m);
    for (std::size_t j = 0; j < m; ++j) dg[j] = gg.values[j + 1] - gg.values[j];

    const double hmb = std::pow(h, -b);
    const double qbar0 = 1.0 / (1.0 - b);
    const double ginv = 1.0 / std::tgamma(1.0 - b);

    GridFn out;
    out.times = gg.times;
    out.values.assign(m + 1, 0.0);
    out.values[m] =
        gg.values[m] == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    const double* gv = gg.values.data();
    const double tend = gg.times[m];
    parallel_for(m, [&](std::size_t i) {
        const std::size_t L = m - 1 - i;
        double S = gv[i] * cumP[L];
        S -= kernels::dot(gv + i + 1, pbar.data() + 1, L);
        S -= kernels::dot(dg.data() + i + 1, rbar.data() + 1, L);
        S -= dg[i] * qbar0;
        S *= hmb;
        out.values[i] = ginv * (gv[i] * std::pow(tend - gg.times[i], -b) + b * S);
    });
    return out;
}

namespace {

// integral over [k0 h, (k0+1) h] of |d(w)| w^{-1-b}, d linear with d(k0 h) = dnear,
// d((k0+1)h) = dfar; powmb[k] = (k h)^{-b}, pow1m[k] = (k h)^{1-b}
double cell_abs_singular(double dnear, double dfar, std::size_t k0, double h, double b,
                         const double* powmb, const double* pow1m) {
    if (k0 == 0) return std::fabs(dfar) * powmb[1] / (1.0 - b); // d vanishes at w = 0
    const double w0 = static_cast<double>(k0) * h;
    const double B = (dfar - dnear) / h;
    const double A = dnear - B * w0;
    auto seg = [&](double pa_mb, double pb_mb, double pa_1m, double pb_1m) {
        const double i0 = (pa_mb - pb_mb) / b;
        const double i1 = (pb_1m - pa_1m) / (1.0 - b);
        return A * i0 + B * i1;
    };
    if (dnear >= 0.0 && dfar >= 0.0)
        return seg(powmb[k0], powmb[k0 + 1], pow1m[k0], pow1m[k0 + 1]);
    if (dnear <= 0.0 && dfar <= 0.0)
        return -seg(powmb[k0], powmb[k0 + 1], pow1m[k0], pow1m[k0 + 1]);
    const double wz = -A / B; // sign change inside the cell
    const double pz_mb = std::pow(wz, -b);
    const double pz_1m = std::pow(wz, 1.0 - b);
    const double s1 = seg(powmb[k0], pz_mb, pow1m[k0], pz_1m);
    const double s2 = seg(pz_mb, powmb[k0 + 1], pz_1m, pow1m[k0 + 1]);
    return (dnear > 0.0 ? s1 : -s1) + (dfar > 0.0 ? s2 : -s2);
}

} // namespace

double besov_norm_w1(const GridFn& f, const FracParams& params) {
    validate(params);
    validate_grid(f);
    const std::size_t n = f.size() - 1;
    const double b = params.beta;
    const double h = f.times[1] - f.times[0];

    std::vector<double> powmb(n + 1, 0.0), pow1m(n + 1, 0.0), powb(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double w = static_cast<double>(k) * h;
        powmb[k] = std::pow(w, -b);
        pow1m[k] = std::pow(w, 1.0 - b);
        powb[k] = std::pow(w, b);
    }

    const double* fv = f.values.data();
    std::vector<double> best(n, 0.0);
    parallel_for(n, [&](std::size_t is) {
        double inner = 0.0;
        double local = 0.0;
        for (std::size_t j = is; j < n; ++j) {
            const double dnear = fv[j] - fv[is];
            const double dfar = fv[j + 1] - fv[is];
            inner += cell_abs_singular(dnear, dfar, j - is, h, b, powmb.data(), pow1m.data());
            const double cand = std::fabs(dfar) / powb[j + 1 - is] + inner;
            local = std::max(local, cand);
        }
        best[is] = local;
    });
    return *std::max_element(best.begin(), best.end());
}

double besov_norm_w2(const GridFn& f, const FracParams& params) {
    validate(params);
    validate_grid(f);
    const std::size_t n = f.size() - 1;
    const double b = params.beta;
    const double h = f.times[1] - f.times[0];

    // first term: |f(s)| s^{-b} integrated cell by cell
    std::vector<double> p1m(n + 1, 0.0), p2m(n + 1, 0.0); // (kh)^{1-b}, (kh)^{2-b}
    for (std::size_t k = 1; k <= n; ++k) {
        const double x = static_cast<double>(k) * h;
        p1m[k] = std::pow(x, 1.0 - b);
        p2m[k] = std::pow(x, 2.0 - b);
    }
    double term1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double v0 = f.values[j], v1 = f.values[j + 1];
        const double x0 = static_cast<double>(j) * h;
        const double B = (v1 - v0) / h;
        const double A = v0 - B * x0;
        auto seg = [&](double pa1, double pb1, double pa2, double pb2) {
            return A * (pb1 - pa1) / (1.0 - b) + B * (pb2 - pa2) / (2.0 - b);
        };
        if (v0 >= 0.0 && v1 >= 0.0) {
            term1 += seg(p1m[j], p1m[j + 1], p2m[j], p2m[j + 1]);
        } else if (v0 <= 0.0 && v1 <= 0.0) {
            term1 -= seg(p1m[j], p1m[j + 1], p2m[j], p2m[j + 1]);
        } else {
            const double sz = -A / B;
            const double z1 = std::pow(sz, 1.0 - b), z2 = std::pow(sz, 2.0 - b);
            const double sa = seg(p1m[j], z1, p2m[j], z2);
            const double sb = seg(z1, p1m[j + 1], z2, p2m[j + 1]);
            term1 += (v0 > 0.0 ? sa : -sa) + (v1 > 0.0 ? sb : -sb);
        }
    }

    // second term: inner singular integral per grid point, then trapezoid in s
    std::vector<double> powmb(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) powmb[k] = std::pow(static_cast<double>(k) * h, -b);
    const double* fv = f.values.data();
    std::vector<double> innerv(n + 1, 0.0);
    parallel_for(n, [&](std::size_t u) {
        const std::size_t is = u + 1;
        double acc = 0.0;
        for (std::size_t j = 0; j < is; ++j) {
            const double dnear = fv[j + 1] - fv[is];
            const double dfar = fv[j] - fv[is];
            acc += cell_abs_singular(dnear, dfar, is - j - 1, h, b, powmb.data(), p1m.data());
        }
        innerv[is] = acc;
    });
    double term2 = 0.0;
    for (std::size_t i = 1; i < n; ++i) term2 += innerv[i];
    term2 += 0.5 * (innerv[0] + innerv[n]);
    term2 *= h;

    return term1 + term2;
}

BesovReport besov_report(const GridFn& f, const FracParams& params) {
    BesovReport r;
    r.beta = params.beta;
    r.norm_w1 = besov_norm_w1(f, params);
    r.norm_w2 = besov_norm_w2(f, params);
    r.grid_points = f.size();
    return r;
}

double gls_integral(const GridFn& f, const GridFn& g, const FracParams& params, double t) {
    validate(params);
    validate_grid(f);
    validate_grid(g);
    if (f.times.size() != g.times.size() ||
        std::fabs(f.times.back() - g.times.back()) > 1e-12 * (1.0 + f.times.back()))
        throw std::invalid_argument("gls_integral: f and g must live on the same grid");
    const std::size_t m = grid_index_of(f, t);
    if (m < 2) throw std::invalid_argument("gls_integral: need at least 2 grid cells up to t");

    const GridFn ff = prefix(f, m);
    GridFn ghat;
    ghat.times = ff.times;
    ghat.values.resize(m + 1);
    const double gt = g.values[m];
    for (std::size_t i = 0; i <= m; ++i) ghat.values[i] = gt - g.values[i];

    const double b = params.beta;
    FracParams pleft{b, params.grid_points};
    FracParams pright{1.0 - b, params.grid_points};
    const GridFn phi = weyl_deriv_left(ff, pleft);
    const GridFn psi = weyl_deriv_right(ghat, pright, t);

    const double h = ff.times[1] - ff.times[0];
    double s = 0.0;
    for (std::size_t i = 1; i < m; ++i) s += phi.values[i] * psi.values[i];
    const double p1 = phi.values[1] * psi.values[1];
    const double pm = phi.values[m - 1] * psi.values[m - 1];
    // interior trapezoid on [h, t-h]; end cells integrate the boundary
    // singularities x^{-b} (left) and (t-x)^{b} (right) in closed form
    return h * (s - 0.5 * (p1 + pm)) + p1 * h / (1.0 - b) + pm * h / (1.0 + b);
}

BoundCheck gls_bound_check(const GridFn& f, const GridFn& g, const FracParams& params, double t) {
    const std::size_t m = grid_index_of(f, t);
    const GridFn ff = prefix(f, m);
    const GridFn gg = prefix(g, m);
    BoundCheck r;
    r.lhs = std::fabs(gls_integral(f, g, params, t));
    const double w2 = besov_norm_w2(ff, params);
    FracParams dual{1.0 - params.beta, params.grid_points};
    const double w1 = besov_norm_w1(gg, dual);
    r.rhs = w2 * w1 / std::tgamma(params.beta);
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-6);
    return r;
}

} // namespace fracpath::fraccalc
