#include "fracpath/bv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracpath/kernels.hpp"

namespace fracpath::bv {

namespace {

void check_finite(const std::vector<double>& xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

} // namespace

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> k, std::vector<double> v)
    : knots(std::move(k)), values(std::move(v)) {
    if (knots.size() < 2) throw std::invalid_argument("PiecewiseLinearFn: need at least 2 knots");
    if (knots.size() != values.size())
        throw std::invalid_argument("PiecewiseLinearFn: knots/values length mismatch");
    if (knots.front() != 0.0) throw std::invalid_argument("PiecewiseLinearFn: knots must start at 0");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("PiecewiseLinearFn: knots must be strictly increasing");
    check_finite(knots, "PiecewiseLinearFn knots");
    check_finite(values, "PiecewiseLinearFn values");
}

double PiecewiseLinearFn::operator()(double t) const {
    if (t < knots.front() || t > knots.back())
        throw std::out_of_range("PiecewiseLinearFn: t outside domain");
    auto it = std::lower_bound(knots.begin(), knots.end(), t);
    if (it != knots.end() && *it == t) return values[static_cast<std::size_t>(it - knots.begin())];
    const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
    const double w = (t - knots[i]) / (knots[i + 1] - knots[i]);
    return values[i] + w * (values[i + 1] - values[i]);
}

StepFn::StepFn(double initial, std::vector<Jump> js, double T)
    : initial_value(initial), jumps(std::move(js)), horizon(T) {
    if (!(horizon > 0.0)) throw std::invalid_argument("StepFn: horizon must be positive");
    double prev = 0.0;
    for (const Jump& j : jumps) {
        if (!(j.time > prev) || !(j.time <= horizon))
            throw std::invalid_argument("StepFn: jump times must be strictly increasing in (0, horizon]");
        if (j.size == 0.0 || !std::isfinite(j.size))
            throw std::invalid_argument("StepFn: jump sizes must be nonzero and finite");
        prev = j.time;
    }
}

double StepFn::operator()(double t) const {
    if (t < 0.0 || t > horizon) throw std::out_of_range("StepFn: t outside domain");
    double v = initial_value;
    for (const Jump& j : jumps) {
        if (j.time > t) break;
        v += j.size;
    }
    return v;
}

double StepFn::left_limit(double t) const {
    if (t < 0.0 || t > horizon) throw std::out_of_range("StepFn: t outside domain");
    double v = initial_value;
    for (const Jump& j : jumps) {
        if (j.time >= t) break;
        v += j.size;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Running-max walk for PL functions. Record segments are collected during the
// walk with their endpoint values, so no value is ever re-derived by
// interpolation: crossing knots carry the old maximum bitwise and the record
// integral telescopes exactly.
// ---------------------------------------------------------------------------

namespace {

struct SegmentV {
    double a, b;   // times
    double va, vb; // f* values at the endpoints
};

struct MaxAnalysis {
    std::vector<double> star_knots;
    std::vector<double> star_values;
    std::vector<SegmentV> segments;
};

MaxAnalysis max_analysis(const PiecewiseLinearFn& f) {
    const std::size_t n = f.knots.size();
    MaxAnalysis out;
    out.star_knots.reserve(n + 8);
    out.star_values.reserve(n + 8);

    double cur_max = f.values[0];
    bool at_max = true;
    bool open = true;
    double open_a = f.knots[0];
    double open_va = f.values[0];

    out.star_knots.push_back(f.knots[0]);
    out.star_values.push_back(f.values[0]);

    auto close_segment = [&](double b) {
        out.segments.push_back({open_a, b, open_va, cur_max});
        open = false;
    };
    auto open_segment = [&](double a) {
        open_a = a;
        open_va = cur_max;
        open = true;
    };

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double t0 = f.knots[i], t1 = f.knots[i + 1];
        const double v0 = f.values[i], v1 = f.values[i + 1];
        if (at_max) {
            if (v1 >= v0) { // rides the maximum across the cell
                cur_max = v1;
                out.star_knots.push_back(t1);
                out.star_values.push_back(v1);
            } else { // falls off the maximum at t0
                close_segment(t0);
                out.star_knots.push_back(t1);
                out.star_values.push_back(cur_max);
                at_max = false;
            }
        } else if (v1 > cur_max) { // re-crosses the old maximum inside the cell
            const double ratio = (cur_max - v0) / (v1 - v0);
            const double ts = t0 + ratio * (t1 - t0);
            if (ts <= t0) { // rounding guard: crossing collapses onto the left knot
                open_segment(t0);
            } else if (ts >= t1) { // rounding guard: collapses onto the right knot
                cur_max = v1;
                open_segment(t1);
            } else {
                out.star_knots.push_back(ts);
                out.star_values.push_back(cur_max);
                open_segment(ts);
            }
            cur_max = v1;
            out.star_knots.push_back(t1);
            out.star_values.push_back(v1);
            at_max = true;
        } else if (v1 == cur_max) { // touches the maximum exactly at t1
            out.star_knots.push_back(t1);
            out.star_values.push_back(cur_max);
            open_segment(t1);
            at_max = true;
        } else { // stays strictly below
            out.star_knots.push_back(t1);
            out.star_values.push_back(cur_max);
        }
    }
    if (open) close_segment(f.knots.back());

    // merge segments that share an endpoint (rounding-guard degeneracies)
    std::vector<SegmentV> merged;
    for (const SegmentV& s : out.segments) {
        if (!merged.empty() && merged.back().b == s.a) {
            merged.back().b = s.b;
            merged.back().vb = s.vb;
        } else {
            merged.push_back(s);
        }
    }
    out.segments = std::move(merged);
    return out;
}

} // namespace

PiecewiseLinearFn running_max(const PiecewiseLinearFn& f) {
    MaxAnalysis a = max_analysis(f);
    return PiecewiseLinearFn(std::move(a.star_knots), std::move(a.star_values));
}

StepFn running_max(const StepFn& f) {
    std::vector<Jump> out_jumps;
    double level = f.initial_value;
    double cur_max = f.initial_value;
    for (const Jump& j : f.jumps) {
        level += j.size;
        if (level > cur_max) {
            out_jumps.push_back({j.time, level - cur_max});
            cur_max = level;
        }
    }
    return StepFn(f.initial_value, std::move(out_jumps), f.horizon);
}

SampledPath running_max(const SampledPath& p) {
    SampledPath out;
    out.times = p.times;
    out.values = prefix_max(p.values);
    return out;
}

double total_variation(const PiecewiseLinearFn& f) {
    return kernels::sum_abs_diff(f.values.data(), f.values.size());
}

double total_variation(const StepFn& f) {
    double tv = 0.0;
    for (const Jump& j : f.jumps) tv += std::fabs(j.size);
    return tv;
}

JordanPair jordan_decompose(const PiecewiseLinearFn& f) {
    const std::size_t n = f.knots.size();
    std::vector<double> vp(n, 0.0), vn(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = f.values[i + 1] - f.values[i];
        vp[i + 1] = vp[i] + (d > 0.0 ? d : 0.0);
        vn[i + 1] = vn[i] + (d < 0.0 ? -d : 0.0);
    }
    JordanPair jp;
    jp.positive_variation = PiecewiseLinearFn(f.knots, std::move(vp));
    jp.negative_variation = PiecewiseLinearFn(f.knots, std::move(vn));
    return jp;
}

namespace {

void check_interval(const Interval& iv, double domain_end) {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("ls_measure: interval endpoints out of order");
    if (iv.lo < 0.0 || iv.hi > domain_end)
        throw std::out_of_range("ls_measure: interval outside the function domain");
}

} // namespace

double ls_measure(const PiecewiseLinearFn& f, const Interval& iv) {
    check_interval(iv, f.domain_end());
    return f(iv.hi) - f(iv.lo); // continuous: no atoms, openness flags carry no mass
}

double ls_measure(const StepFn& f, const Interval& iv) {
    check_interval(iv, f.domain_end());
    double m = 0.0;
    for (const Jump& j : f.jumps) {
        if (j.time > iv.hi) break;
        const bool in_lo = j.time > iv.lo || (j.time == iv.lo && iv.closed_lo);
        const bool in_hi = j.time < iv.hi || (j.time == iv.hi && iv.closed_hi);
        if (in_lo && in_hi) m += j.size;
    }
    return m;
}

RecordSet record_set(const PiecewiseLinearFn& f) {
    MaxAnalysis a = max_analysis(f);
    RecordSet rs;
    rs.segments.reserve(a.segments.size());
    for (const SegmentV& s : a.segments) rs.segments.push_back({s.a, s.b, true, true});
    return rs;
}

double record_integral(const PiecewiseLinearFn& f) {
    MaxAnalysis a = max_analysis(f);
    double acc = 0.0;
    for (const SegmentV& s : a.segments) acc += s.vb - s.va;
    return acc;
}

double ac_check(const PiecewiseLinearFn& f) {
    MaxAnalysis a = max_analysis(f);
    double acc = 0.0;
    for (const SegmentV& s : a.segments) {
        if (!(s.b > s.a)) continue; // isolated record points carry no Lebesgue mass
        auto it = std::upper_bound(f.knots.begin(), f.knots.end(), s.a);
        std::size_t i = static_cast<std::size_t>(it - f.knots.begin());
        i = i > 0 ? i - 1 : 0; // cell with knots[i] <= s.a
        for (; i + 1 < f.knots.size() && f.knots[i] < s.b; ++i) {
            const double lo = std::max(s.a, f.knots[i]);
            const double hi = std::min(s.b, f.knots[i + 1]);
            if (hi <= lo) continue;
            const double slope = (f.values[i + 1] - f.values[i]) / (f.knots[i + 1] - f.knots[i]);
            acc += slope * (hi - lo);
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Record integral for discontinuous inputs: event walk over base knots and
// overlay jumps. Continuous stretches contribute their rise on the record set
// (exactly as in the continuous case); an atom landing at or above the old maximum
// belongs to the record set and is counted in full, so it overshoots the
// maximum's growth by the pre-jump gap f*(tau-) - f(tau-).
// ---------------------------------------------------------------------------

StepRecordResult record_integral_step(const PiecewiseLinearFn& base, const StepFn& overlay) {
    if (overlay.horizon != base.domain_end())
        throw std::invalid_argument("record_integral_step: base and overlay domains differ");

    std::vector<double> events = base.knots;
    for (const Jump& j : overlay.jumps) events.push_back(j.time);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    double overlay_level = overlay.initial_value;
    const double g0 = base.values.front() + overlay_level;
    double cur_max = g0;
    bool at_max = true;

    StepRecordResult r;
    std::size_t jp = 0;
    for (std::size_t k = 1; k < events.size(); ++k) {
        const double w = events[k];
        const double g_w = base(w) + overlay_level; // left limit at w (jump not yet applied)
        if (at_max) {
            if (g_w >= cur_max) {
                r.integral += g_w - cur_max;
                cur_max = g_w;
            } else {
                at_max = false;
            }
        } else if (g_w > cur_max) { // continuous re-crossing inside the stretch
            r.integral += g_w - cur_max;
            cur_max = g_w;
            at_max = true;
        } else if (g_w == cur_max) {
            at_max = true;
        }
        if (jp < overlay.jumps.size() && overlay.jumps[jp].time == w) {
            const double s = overlay.jumps[jp].size;
            ++jp;
            overlay_level += s;
            const double v_new = g_w + s;
            if (v_new >= cur_max) { // atom lands in the record set
                r.integral += s;
                r.gap_sum += cur_max - g_w;
                r.record_jumps += 1;
                cur_max = v_new;
                at_max = true;
            } else {
                at_max = false;
            }
        }
    }
    r.residual = (cur_max - g0) - r.integral;
    return r;
}

StepRecordResult record_integral_step(const StepFn& f) {
    PiecewiseLinearFn zero({0.0, f.horizon}, {0.0, 0.0});
    return record_integral_step(zero, f);
}

} // namespace fracpath::bv
