#pragma once

#include <complex>
#include <vector>

namespace fracpath {

// In-place radix-2 FFT, length must be a power of two (all grids here are
// dyadic). Forward uses exp(-2*pi*i*jk/n); inverse applies the 1/n factor.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse = false);

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

} // namespace fracpath
