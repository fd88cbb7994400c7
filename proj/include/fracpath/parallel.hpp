#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace fracpath {

// Worker count: FRACPATH_THREADS if set and positive, else hardware
// concurrency. Results must be written to preassigned slots so that the
// thread count never changes numerical output.
inline unsigned thread_count() {
    if (const char* env = std::getenv("FRACPATH_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Static block partition of [0, n); fn(i) must only touch slot i of shared
// state. Exceptions inside workers terminate (tasks are expected not to throw).
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = thread_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += used) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// Compensated (Kahan) sum in index order: the reduction result is independent
// of how many threads produced the slots.
inline double kahan_sum(const std::vector<double>& xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace fracpath
