#pragma once

#include <complex>
#include <vector>

namespace lsts {

//! Real-to-complex DFT, out[k] = sum_j x[j] exp(-2 pi i j k / n), k = 0..n/2.
//! FFTW plans are cached per size; safe to call from several threads.
std::vector<std::complex<double>> rfft(const std::vector<double>& x);

//! Complex forward DFT, out[k] = sum_j x[j] exp(-2 pi i j k / n).
std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x);

//! c[k] = sum_j x[j] cos(2 pi j k / n), k = 0..n/2, for real input.
std::vector<double> cosine_sums(const std::vector<double>& x);

//! Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace lsts
