#pragma once

// Two-component spinors, 2x2 complex matrices and phase bookkeeping helpers.

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace gpd {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Spinor {
  cplx up{};
  cplx down{};

  constexpr cplx& operator[](int i) { return i == 0 ? up : down; }
  constexpr const cplx& operator[](int i) const { return i == 0 ? up : down; }

  friend Spinor operator+(const Spinor& a, const Spinor& b) {
    return {a.up + b.up, a.down + b.down};
  }
  friend Spinor operator-(const Spinor& a, const Spinor& b) {
    return {a.up - b.up, a.down - b.down};
  }
  friend Spinor operator*(cplx s, const Spinor& v) { return {s * v.up, s * v.down}; }
  friend Spinor operator*(double s, const Spinor& v) { return {s * v.up, s * v.down}; }
  friend bool operator==(const Spinor&, const Spinor&) = default;
};

/// Hermitian inner product <a|b>, antilinear in the first slot.
inline cplx inner(const Spinor& a, const Spinor& b) {
  return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

inline double norm_sq(const Spinor& v) { return std::norm(v.up) + std::norm(v.down); }
double norm(const Spinor& v);

/// Largest componentwise modulus |a_i - b_i|.
double max_component_diff(const Spinor& a, const Spinor& b);

/// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<std::array<cplx, 2>, 2> m{};

  constexpr cplx& operator()(int r, int c) { return m[r][c]; }
  constexpr const cplx& operator()(int r, int c) const { return m[r][c]; }

  static constexpr Mat2 zero() { return {}; }
  static Mat2 identity();
  static Mat2 outer(const Spinor& ket, const Spinor& bra);  // |ket><bra|

  friend Mat2 operator+(const Mat2& a, const Mat2& b);
  friend Mat2 operator-(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(cplx s, const Mat2& a);
  friend Spinor operator*(const Mat2& a, const Spinor& v);
  friend bool operator==(const Mat2&, const Mat2&) = default;

  Mat2 adjoint() const;
  cplx trace() const { return m[0][0] + m[1][1]; }
};

namespace pauli {
Mat2 x();
Mat2 y();
Mat2 z();
}  // namespace pauli

/// <a|M|b>
cplx matrix_element(const Spinor& a, const Mat2& op, const Spinor& b);

/// Spectral norm of a 2x2 matrix (largest singular value).
double operator_norm(const Mat2& a);

/// Eigenvalues (ascending) of a 2x2 Hermitian matrix. The anti-Hermitian part is ignored.
std::array<double, 2> hermitian_eigenvalues(const Mat2& a);

/// Largest |a_ij - conj(a_ji)|.
double hermiticity_residual(const Mat2& a);

/// Reduce an angle to the principal branch (-pi, pi].
double wrap_phase(double phase);

/// Distance between two angles on the circle, in [0, pi].
double phase_distance(double a, double b);

/// Remove 2*pi jumps by continuity. The first sample is shifted onto `anchor` modulo 2*pi
/// (closest representative), every later sample onto the representative nearest its
/// predecessor.
std::vector<double> unwrap_series(std::span<const double> phases, double anchor = 0.0);

}  // namespace gpd
