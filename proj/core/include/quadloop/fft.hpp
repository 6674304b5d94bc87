#pragma once

#include <complex>
#include <vector>

#include "quadloop/errors.hpp"

namespace quadloop {

// In-place iterative radix-2 FFT; n must be a power of two. sign = -1 gives
// the forward transform sum_j a_j exp(-2*pi*i*j*k/n) (unnormalized).
inline void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw GridMismatchError("FFT size must be a power of two, got " + std::to_string(n));
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * 3.14159265358979323846 / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Normalized Fourier coefficients c_k = (1/n) sum_j f_j exp(-2 pi i j k / n),
// k stored in wrap-around order 0..n-1 (negative frequencies in the top half).
inline std::vector<std::complex<double>> fourier_coeffs(
    std::vector<std::complex<double>> samples) {
  fft_radix2(samples, -1);
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (auto& c : samples) c *= inv;
  return samples;
}

inline std::vector<std::complex<double>> fourier_synthesis(
    std::vector<std::complex<double>> coeffs) {
  fft_radix2(coeffs, +1);
  return coeffs;
}

}  // namespace quadloop
