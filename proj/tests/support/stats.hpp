#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

// Small statistics helpers shared by the distributional tests.

namespace testsupport {

// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|,
// computed with a sorted merge walk.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t m = a.size(), n = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < m && j < n) {
        const double x = std::min(a[i], b[j]);
        while (i < m && a[i] <= x) ++i;
        while (j < n && b[j] <= x) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(m);
        const double fb = static_cast<double>(j) / static_cast<double>(n);
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

// Critical value for the two-sample test: reject iff D > c(alpha) * sqrt((m+n)/(m n)).
// c(0.01) = 1.6276 (sqrt(-ln(alpha/2)/2)).
inline double ks_critical(std::size_t m, std::size_t n, double c_alpha) {
    return c_alpha * std::sqrt(static_cast<double>(m + n) /
                               (static_cast<double>(m) * static_cast<double>(n)));
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Standard error of the sample mean.
inline double std_error(const std::vector<double>& xs) {
    const double mu = mean(xs);
    double s2 = 0.0;
    for (double x : xs) s2 += (x - mu) * (x - mu);
    s2 /= static_cast<double>(xs.size() - 1);
    return std::sqrt(s2 / static_cast<double>(xs.size()));
}

} // namespace testsupport
