#pragma once

#include <cmath>
#include <cstdint>
#include <cstddef>

// Counter-based generator (Philox2x64-10). Streams derived from (seed, stream
// id) are statistically independent and may be consumed in any order, which
// makes replica-parallel Monte Carlo reproducible regardless of scheduling.

namespace fracpath {

class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_(seed), ctr1_(stream) {}

    std::uint64_t next_u64() {
        if (have_ == 0) {
            generate_block();
            have_ = 2;
        }
        return buf_[2 - have_--];
    }

    // uniform on [0,1) with 53 random bits
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on (0,1]; safe as a log() argument
    double next_uniform_oc() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_normal() {
        if (normal_valid_) {
            normal_valid_ = false;
            return normal_spare_;
        }
        const double u1 = next_uniform_oc();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        normal_spare_ = r * std::sin(a);
        normal_valid_ = true;
        return r * std::cos(a);
    }

    void fill_normals(double* out, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) out[i] = next_normal();
    }

private:
    static constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ull;
    static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ull;

    void generate_block() {
        std::uint64_t c0 = ctr0_++;
        std::uint64_t c1 = ctr1_;
        std::uint64_t k = key_;
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 prod =
                static_cast<unsigned __int128>(kMul) * c0;
            const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
            const std::uint64_t lo = static_cast<std::uint64_t>(prod);
            c0 = hi ^ k ^ c1;
            c1 = lo;
            k += kWeyl;
        }
        buf_[0] = c0;
        buf_[1] = c1;
    }

    std::uint64_t key_;
    std::uint64_t ctr0_ = 0;
    std::uint64_t ctr1_;
    std::uint64_t buf_[2] = {0, 0};
    int have_ = 0;
    double normal_spare_ = 0.0;
    bool normal_valid_ = false;
};

} // namespace fracpath
