#pragma once

#include <complex>
#include <vector>

namespace rotrack {

using Cplx = std::complex<double>;

// In-place iterative radix-2 FFT for power-of-two sizes, Bluestein
// chirp-z fallback otherwise. inverse = true applies the 1/n factor.
void fft_1d(std::vector<Cplx>& a, bool inverse);

// Row-column 2-D transform of a width x height grid stored row major.
void fft_2d(std::vector<Cplx>& a, int width, int height, bool inverse);

}  // namespace rotrack
