#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fracpath/fft.hpp"
#include "fracpath/rng.hpp"

using cd = std::complex<double>;
using fracpath::fft_pow2;

TEST_CASE("pow2 helpers") {
    CHECK(fracpath::is_pow2(1));
    CHECK(fracpath::is_pow2(2));
    CHECK(fracpath::is_pow2(1024));
    CHECK_FALSE(fracpath::is_pow2(0));
    CHECK_FALSE(fracpath::is_pow2(3));
    CHECK_FALSE(fracpath::is_pow2(1023));
    CHECK(fracpath::next_pow2(1) == 1);
    CHECK(fracpath::next_pow2(2) == 2);
    CHECK(fracpath::next_pow2(3) == 4);
    CHECK(fracpath::next_pow2(1025) == 2048);
}

TEST_CASE("non power-of-two length throws") {
    std::vector<cd> a(3, cd(1.0, 0.0));
    CHECK_THROWS_AS(fft_pow2(a), std::invalid_argument);
    std::vector<cd> empty;
    CHECK_THROWS_AS(fft_pow2(empty), std::invalid_argument);
}

TEST_CASE("impulse transforms to all-ones") {
    std::vector<cd> a(8, cd(0.0, 0.0));
    a[0] = cd(1.0, 0.0);
    fft_pow2(a);
    for (const cd& x : a) {
        CHECK(x.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(x.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    }
}

TEST_CASE("constant transforms to a single spike at zero frequency") {
    std::vector<cd> a(16, cd(2.5, 0.0));
    fft_pow2(a);
    CHECK(a[0].real() == doctest::Approx(40.0).epsilon(1e-14));
    for (std::size_t k = 1; k < a.size(); ++k) CHECK(std::abs(a[k]) < 1e-12);
}

TEST_CASE("known 4-point DFT") {
    std::vector<cd> a = {cd(1, 0), cd(2, 0), cd(3, 0), cd(4, 0)};
    fft_pow2(a);
    CHECK(std::abs(a[0] - cd(10, 0)) < 1e-13);
    CHECK(std::abs(a[1] - cd(-2, 2)) < 1e-13);
    CHECK(std::abs(a[2] - cd(-2, 0)) < 1e-13);
    CHECK(std::abs(a[3] - cd(-2, -2)) < 1e-13);
}

TEST_CASE("forward-inverse roundtrip and Parseval") {
    fracpath::Philox rng(77, 0);
    const std::size_t n = 512;
    std::vector<cd> a(n);
    for (auto& x : a) x = cd(rng.next_normal(), rng.next_normal());
    const std::vector<cd> orig = a;

    double time_energy = 0.0;
    for (const cd& x : a) time_energy += std::norm(x);

    fft_pow2(a);
    double freq_energy = 0.0;
    for (const cd& x : a) freq_energy += std::norm(x);
    CHECK(freq_energy / static_cast<double>(n) ==
          doctest::Approx(time_energy).epsilon(1e-12));

    fft_pow2(a, /*inverse=*/true);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - orig[i]) < 1e-12);
}

TEST_CASE("length one is the identity") {
    std::vector<cd> a = {cd(3.0, -1.0)};
    fft_pow2(a);
    CHECK(a[0] == cd(3.0, -1.0));
    fft_pow2(a, true);
    CHECK(a[0] == cd(3.0, -1.0));
}
