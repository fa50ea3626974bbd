#pragma once

// Reduced density matrix of a superposition a psi_upper + b psi_lower after tracing out
// the boson-carrying final states. The probability leaked from the upper branch,
// |a|^2 (1 - exp(-Gamma t)), reappears on the lower level, so Tr rho = |a|^2 + |b|^2.
//
// Matrices are expressed in the instantaneous basis (w_upper(t), w_lower(t)); index 0 is
// the upper level.

#include "gpd/bath.hpp"
#include "gpd/spin_core.hpp"

namespace gpd {

struct SuperposedState {
  cplx a{};  // amplitude on the upper level
  cplx b{};  // amplitude on the lower level

  double norm_sq() const { return std::norm(a) + std::norm(b); }
};

struct ReducedDensity {
  Mat2 matrix;        // instantaneous (upper, lower) basis
  double time = 0.0;
  Level upper = Level::Minus;

  double trace() const { return matrix.trace().real(); }
  /// Tr(rho^2) / (Tr rho)^2.
  double purity() const;
  double population_upper() const { return matrix(0, 0).real(); }
  double population_lower() const { return matrix(1, 1).real(); }
};

/// psi(t) = a psi_upper(t) + b psi_lower(t), each branch started in w_l(t0) at t0.
Spinor evolve_pure(const SuperposedState& state, const FieldParams& field,
                   const BathSpectrum& spec, double t, double t0 = 0.0);

ReducedDensity reduced_density(const SuperposedState& state, const FieldParams& field,
                               const BathSpectrum& spec, double t, double t0 = 0.0);

/// <w_upper(t)| rho(t) |w_lower(t)>; magnitude |a b| exp(-Gamma (t - t0)/2).
cplx offdiagonal_coherence(const SuperposedState& state, const FieldParams& field,
                           const BathSpectrum& spec, double t, double t0 = 0.0);

/// Change of representation to the fixed sigma_z (lab) basis: W rho W^dagger with
/// W = [w_upper(t), w_lower(t)].
Mat2 to_lab_basis(const ReducedDensity& rho, const FieldParams& field);

/// (|a|^2 + |b|^2) |psi_lower(t)><psi_lower(t)| in the instantaneous basis: the t -> inf
/// limit of reduced_density.
Mat2 asymptotic_density(const SuperposedState& state);

}  // namespace gpd
