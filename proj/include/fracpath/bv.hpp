#pragma once

#include <cstddef>
#include <vector>

#include "fracpath/path.hpp"

// Exact bounded-variation calculus on piecewise-linear and step functions:
// running maximum, Jordan decomposition, Lebesgue-Stieltjes measures of
// intervals, and the record-set integral representation
//   f*(T) = f(0) + integral over {f* = f} of d(mu_f),
// which holds exactly for continuous f and fails by the jump gaps for
// discontinuous f. All record bookkeeping is value-based (crossing values are
// carried bitwise), so the telescoping identities hold to the last ulp.

namespace fracpath::bv {

struct PiecewiseLinearFn {
    std::vector<double> knots;  // strictly increasing, knots.front() == 0
    std::vector<double> values; // same length

    PiecewiseLinearFn() = default;
    PiecewiseLinearFn(std::vector<double> k, std::vector<double> v);

    double operator()(double t) const; // linear interpolation, exact at knots
    double domain_end() const { return knots.back(); }
};

struct Jump {
    double time;
    double size;
};

struct StepFn {
    double initial_value = 0.0;
    std::vector<Jump> jumps; // times strictly increasing, in (0, horizon]; sizes nonzero
    double horizon = 1.0;

    StepFn() = default;
    StepFn(double initial, std::vector<Jump> js, double T);

    double operator()(double t) const; // right-continuous evaluation
    double left_limit(double t) const;
    double domain_end() const { return horizon; }
};

struct JordanPair {
    PiecewiseLinearFn positive_variation; // V_f, nondecreasing, V_f(0) = 0
    PiecewiseLinearFn negative_variation; // W_f, nondecreasing, W_f(0) = 0
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool closed_lo = true;
    bool closed_hi = true;
};

struct RecordSet {
    std::vector<Interval> segments; // disjoint, ordered, closed; points allowed
};

struct StepRecordResult {
    double integral = 0.0; // Lebesgue-Stieltjes mass collected on the record set
    double residual = 0.0; // f*(T) - f(0) - integral
    double gap_sum = 0.0;  // sum of (f*(tau-) - f(tau-)) over record-breaking jumps
    std::size_t record_jumps = 0;
};

// running maximum, same representation in and out
PiecewiseLinearFn running_max(const PiecewiseLinearFn& f);
StepFn running_max(const StepFn& f);
SampledPath running_max(const SampledPath& p);

double total_variation(const PiecewiseLinearFn& f);
double total_variation(const StepFn& f);

JordanPair jordan_decompose(const PiecewiseLinearFn& f);

// signed measure mu_f of an interval inside [0, domain_end]
double ls_measure(const PiecewiseLinearFn& f, const Interval& iv);
double ls_measure(const StepFn& f, const Interval& iv);

// E = {t : f*(t) = f(t)} as a union of closed intervals
RecordSet record_set(const PiecewiseLinearFn& f);

// integral of the record indicator against mu_f; equals f*(T) - f(0) exactly
double record_integral(const PiecewiseLinearFn& f);

// same integral for discontinuous inputs: atoms landing at or above the old
// maximum count in full, so the identity fails by exactly the jump gaps
StepRecordResult record_integral_step(const StepFn& f);
StepRecordResult record_integral_step(const PiecewiseLinearFn& base, const StepFn& overlay);

// independent route: integrate the piecewise-constant slope over the record set
double ac_check(const PiecewiseLinearFn& f);

} // namespace fracpath::bv
