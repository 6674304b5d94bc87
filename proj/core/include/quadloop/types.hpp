#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace quadloop {

using Cx = std::complex<double>;
using C3 = std::array<Cx, 3>;
using R3 = std::array<double, 3>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

inline C3 operator+(const C3& a, const C3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline C3 operator-(const C3& a, const C3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline C3 operator*(Cx s, const C3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline C3 operator*(double s, const C3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline C3& operator+=(C3& a, const C3& b) { a = a + b; return a; }
inline C3& operator-=(C3& a, const C3& b) { a = a - b; return a; }

// Bilinear (holomorphic) pairing sum a_j b_j.
inline Cx dot_bilinear(const C3& a, const C3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Hermitian pairing sum a_j conj(b_j).
inline Cx dot_hermitian(const C3& a, const C3& b) {
  return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

inline double norm2_sq(const C3& a) { return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]); }
inline double norm2(const C3& a) { return std::sqrt(norm2_sq(a)); }

inline C3 cross(const C3& a, const C3& b) {
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline C3 conj(const C3& a) { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }

inline R3 real_part(const C3& a) { return {a[0].real(), a[1].real(), a[2].real()}; }
inline R3 imag_part(const C3& a) { return {a[0].imag(), a[1].imag(), a[2].imag()}; }

inline double norm2(const R3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }
inline double dot(const R3& a, const R3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline R3 cross(const R3& a, const R3& b) {
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline C3 to_complex(const R3& a) { return {Cx(a[0]), Cx(a[1]), Cx(a[2])}; }

inline bool all_finite(const C3& a) {
  for (const auto& c : a) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

// Imaginary-part magnitude, the distance proxy to the real locus.
inline double kappa(const C3& z) {
  return std::sqrt(z[0].imag() * z[0].imag() + z[1].imag() * z[1].imag() +
                   z[2].imag() * z[2].imag());
}

// |z|^2, the exhaustion value.
inline double u_value(const C3& z) { return norm2_sq(z); }

// Quadric defect |sum z_j^2 - 1|.
inline double quadric_defect(const C3& z) { return std::abs(dot_bilinear(z, z) - 1.0); }

}  // namespace quadloop
