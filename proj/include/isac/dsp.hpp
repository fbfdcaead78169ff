// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace isac::dsp {

using cvec = std::vector<std::complex<double>>;

/// Forward DFT (no normalization), any length.
cvec fft(const cvec& x);

/// Inverse DFT with 1/N normalization.
cvec ifft(const cvec& x);

/// Evaluate the DFT of `x` on a dense sub-band contour: frequencies
/// f_m = f_lo + m / zoom_factor (in DFT-bin units of the length of `x`),
/// m = 0 .. (f_hi - f_lo) * zoom_factor.  zoom_factor = 1 over the full
/// band [0, N) reproduces the plain DFT.  Complex phase is preserved.
cvec czt_band(const cvec& x, double f_lo, double f_hi, int zoom_factor);

/// Periodic Hamming window, w[n] = 0.54 - 0.46 cos(2*pi*n/N).
std::vector<double> hamming_periodic(std::size_t n);

/// Index of the element with maximum magnitude.
std::size_t peak_index(const cvec& v);

/// Median of a copy of `v`.
double median(std::vector<double> v);

} // namespace isac::dsp
