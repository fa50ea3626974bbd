#pragma once

// Zero-temperature bosonic environment coupled through sigma_z, treated to one loop.
//
// The spectral density J(omega) = eta omega (Ohmic) or eta omega^3 (super-Ohmic) has a
// sharp cutoff at omega_c. On shell (E = E_k) the one-loop self-energy is
//
//   Sigma_mk = eta sum_l <w_m|sz|w_l><w_l|sz|w_k>
//              [ i (E_k - E_l) Theta(E_k - E_l) - (E_l - E_k)/pi ln|omega_c/(E_k - E_l) - 1| ]
//
// whose imaginary part gives the decay width and whose real part shifts the level.

#include <stdexcept>
#include <string>
#include <vector>

#include "gpd/spin_core.hpp"

namespace gpd {

enum class SpectrumKind { Ohmic, SuperOhmic };
std::string to_string(SpectrumKind kind);

struct BathSpectrum {
  SpectrumKind kind = SpectrumKind::Ohmic;
  double eta = 0.0;      // dimensionless coupling, >= 0
  double omega_c = 1.0;  // cutoff, > 0

  /// Throws std::invalid_argument for eta < 0, omega_c <= 0 or non-finite input.
  static BathSpectrum make(SpectrumKind kind, double eta, double omega_c);

  /// Validity advisories (weak coupling, omega_c > B). Never throws.
  std::vector<std::string> warnings(const FieldParams* field = nullptr) const;

  friend bool operator==(const BathSpectrum&, const BathSpectrum&) = default;
};

/// Raised when E_k - E_l sits on the cutoff, where ln|omega_c/(E_k - E_l) - 1| diverges.
class CutoffResonanceError : public std::runtime_error {
 public:
  CutoffResonanceError(Level k, double transition, double omega_c);
  Level level() const { return level_; }
  double transition() const { return transition_; }

 private:
  Level level_;
  double transition_;
};

/// Relative distance (in units of B) under which a transition counts as resonant with
/// the cutoff.
inline constexpr double cutoff_resonance_tolerance = 1e-9;

/// J(omega); zero above the cutoff. Throws std::invalid_argument for omega < 0.
double spectral_density(const BathSpectrum& spec, double omega);

/// On-shell Sigma_mk (E evaluated at E_k). Off-diagonal entries are diagnostic only.
/// Requires an Ohmic spectrum.
cplx self_energy(const FieldParams& field, const BathSpectrum& spec, Level m, Level k);
inline cplx self_energy_diag(const FieldParams& field, const BathSpectrum& spec, Level k) {
  return self_energy(field, spec, k, k);
}

/// Gamma_k from Gamma_k/2 = eta sum_l |<w_k|sz|w_l>|^2 (E_k - E_l) Theta(E_k - E_l).
/// Requires an Ohmic spectrum. Exactly 0 for the lower level.
double decay_width(const FieldParams& field, const BathSpectrum& spec, Level k);

struct DissipativeLevel {
  Level level = Level::Plus;
  double bare_energy = 0.0;   // E_k
  double energy_shift = 0.0;  // O(eta) real self-energy part
  double width = 0.0;         // Gamma_k

  double total_energy() const { return bare_energy + energy_shift; }
};

/// E_k^tot = E_k + (eta/pi) sum_l |<w_k|sz|w_l>|^2 (E_l - E_k) ln|omega_c/(E_k - E_l) - 1|
/// together with Gamma_k. Terms with E_l == E_k are skipped (their prefactor vanishes).
DissipativeLevel total_energy(const FieldParams& field, const BathSpectrum& spec, Level k);

/// Energy shift of level k; the eta-free bracket is multiplied by eta last, so the
/// result is exactly linear in eta.
double energy_shift(const FieldParams& field, const BathSpectrum& spec, Level k);

/// psi_l(t) = exp(-Gamma_l (t - t0)/2) exp(-i E_l^tot (t - t0)) w_l(t), i.e. the O(eta)
/// persistent amplitude started in w_l(t0) at time t0.
Spinor dissipative_amplitude(const FieldParams& field, const BathSpectrum& spec, Level level,
                             double t, double t0 = 0.0);

/// Same, with a precomputed level so sweeps do not redo the self-energy.
Spinor dissipative_amplitude(const FieldParams& field, const DissipativeLevel& level, double t,
                             double t0 = 0.0);

}  // namespace gpd
