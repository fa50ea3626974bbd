#include "gpd/spinor.hpp"

#include <algorithm>
#include <cmath>

namespace gpd {

double norm(const Spinor& v) { return std::sqrt(norm_sq(v)); }

double max_component_diff(const Spinor& a, const Spinor& b) {
  return std::max(std::abs(a.up - b.up), std::abs(a.down - b.down));
}

Mat2 Mat2::identity() {
  Mat2 r;
  r(0, 0) = 1.0;
  r(1, 1) = 1.0;
  return r;
}

Mat2 Mat2::outer(const Spinor& ket, const Spinor& bra) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = ket[i] * std::conj(bra[j]);
  return r;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

Mat2 operator*(cplx s, const Mat2& a) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = s * a(i, j);
  return r;
}

Spinor operator*(const Mat2& a, const Spinor& v) {
  return {a(0, 0) * v.up + a(0, 1) * v.down, a(1, 0) * v.up + a(1, 1) * v.down};
}

Mat2 Mat2::adjoint() const {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = std::conj(m[j][i]);
  return r;
}

namespace pauli {
Mat2 x() {
  Mat2 r;
  r(0, 1) = 1.0;
  r(1, 0) = 1.0;
  return r;
}
Mat2 y() {
  Mat2 r;
  r(0, 1) = cplx(0.0, -1.0);
  r(1, 0) = cplx(0.0, 1.0);
  return r;
}
Mat2 z() {
  Mat2 r;
  r(0, 0) = 1.0;
  r(1, 1) = -1.0;
  return r;
}
}  // namespace pauli

cplx matrix_element(const Spinor& a, const Mat2& op, const Spinor& b) {
  return inner(a, op * b);
}

double operator_norm(const Mat2& a) {
  // sigma_max^2 is the larger eigenvalue of A^dagger A.
  const auto ev = hermitian_eigenvalues(a.adjoint() * a);
  return std::sqrt(std::max(ev[1], 0.0));
}

std::array<double, 2> hermitian_eigenvalues(const Mat2& a) {
  const double p = a(0, 0).real();
  const double q = a(1, 1).real();
  const cplx off = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
  const double mean = 0.5 * (p + q);
  const double radius = std::hypot(0.5 * (p - q), std::abs(off));
  return {mean - radius, mean + radius};
}

double hermiticity_residual(const Mat2& a) {
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r = std::max(r, std::abs(a(i, j) - std::conj(a(j, i))));
  return r;
}

double wrap_phase(double phase) {
  double r = std::remainder(phase, two_pi);  // [-pi, pi]
  if (r <= -pi) r += two_pi;
  return r;
}

double phase_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

std::vector<double> unwrap_series(std::span<const double> phases, double anchor) {
  std::vector<double> out;
  out.reserve(phases.size());
  double previous = anchor;
  for (double p : phases) {
    if (!std::isfinite(p)) {
      out.push_back(p);
      continue;
    }
    const double v = previous + wrap_phase(p - previous);
    out.push_back(v);
    previous = v;
  }
  return out;
}

}  // namespace gpd
