#include "gpd/density.hpp"

#include <cmath>
#include <stdexcept>

namespace gpd {

double ReducedDensity::purity() const {
  const double tr = trace();
  return (matrix * matrix).trace().real() / (tr * tr);
}

namespace {

struct Branches {
  DissipativeLevel upper;
  DissipativeLevel lower;
};

Branches branches(const FieldParams& field, const BathSpectrum& spec) {
  const Level up = upper_level(field);
  return {total_energy(field, spec, up), total_energy(field, spec, other(up))};
}

}  // namespace

Spinor evolve_pure(const SuperposedState& state, const FieldParams& field,
                   const BathSpectrum& spec, double t, double t0) {
  const auto br = branches(field, spec);
  return state.a * dissipative_amplitude(field, br.upper, t, t0) +
         state.b * dissipative_amplitude(field, br.lower, t, t0);
}

ReducedDensity reduced_density(const SuperposedState& state, const FieldParams& field,
                               const BathSpectrum& spec, double t, double t0) {
  if (t < t0) throw std::invalid_argument("reduced_density: t must be >= t0");
  const auto br = branches(field, spec);
  const auto basis = basis_pair(field, t);
  const Spinor& wu = basis[br.upper.level];
  const Spinor& wl = basis[br.lower.level];

  const Spinor psi = state.a * dissipative_amplitude(field, br.upper, t, t0) +
                     state.b * dissipative_amplitude(field, br.lower, t, t0);
  const Spinor coeffs{inner(wu, psi), inner(wl, psi)};

  ReducedDensity rho;
  rho.time = t;
  rho.upper = br.upper.level;
  rho.matrix = Mat2::outer(coeffs, coeffs);
  // Leaked probability |a|^2 [1 - exp(-Gamma (t - t0))] lands on the lower level.
  const double leaked = std::norm(state.a) * -std::expm1(-br.upper.width * (t - t0));
  rho.matrix(1, 1) += leaked;
  return rho;
}

cplx offdiagonal_coherence(const SuperposedState& state, const FieldParams& field,
                           const BathSpectrum& spec, double t, double t0) {
  return reduced_density(state, field, spec, t, t0).matrix(0, 1);
}

Mat2 to_lab_basis(const ReducedDensity& rho, const FieldParams& field) {
  const auto basis = basis_pair(field, rho.time);
  const Spinor& wu = basis[rho.upper];
  const Spinor& wl = basis[other(rho.upper)];
  Mat2 w;
  w(0, 0) = wu.up;
  w(1, 0) = wu.down;
  w(0, 1) = wl.up;
  w(1, 1) = wl.down;
  return w * rho.matrix * w.adjoint();
}

Mat2 asymptotic_density(const SuperposedState& state) {
  Mat2 m;
  m(1, 1) = state.norm_sq();
  return m;
}

}  // namespace gpd
