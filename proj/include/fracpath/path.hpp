#pragma once

#include <cstddef>
#include <vector>

namespace fracpath {

// A process observed on a uniform grid: times[i] = i * horizon / steps,
// values[0] = 0 for anything started at the origin. times.size() == values.size().
struct SampledPath {
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

inline std::vector<double> uniform_grid(double horizon, std::size_t steps) {
    std::vector<double> t(steps + 1);
    const double dt = horizon / static_cast<double>(steps);
    for (std::size_t i = 0; i <= steps; ++i) t[i] = static_cast<double>(i) * dt;
    t[steps] = horizon;
    return t;
}

// running maximum, same length as the input
inline std::vector<double> prefix_max(const std::vector<double>& xs) {
    std::vector<double> m(xs.size());
    double cur = xs.empty() ? 0.0 : xs[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > cur) cur = xs[i];
        m[i] = cur;
    }
    return m;
}

// values[0] = start, values[i] = start + sum of the first i increments
inline std::vector<double> cumsum_from(double start, const std::vector<double>& increments) {
    std::vector<double> v(increments.size() + 1);
    v[0] = start;
    for (std::size_t i = 0; i < increments.size(); ++i) v[i + 1] = v[i] + increments[i];
    return v;
}

} // namespace fracpath
