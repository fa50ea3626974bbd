#include "gpd/bath.hpp"

#include <cmath>
#include <sstream>

namespace gpd {

std::string to_string(SpectrumKind kind) {
  return kind == SpectrumKind::Ohmic ? "ohmic" : "super_ohmic";
}

BathSpectrum BathSpectrum::make(SpectrumKind kind, double eta, double omega_c) {
  if (!std::isfinite(eta) || !std::isfinite(omega_c))
    throw std::invalid_argument("BathSpectrum: non-finite parameter");
  if (eta < 0.0) throw std::invalid_argument("BathSpectrum: eta must be >= 0");
  if (omega_c <= 0.0) throw std::invalid_argument("BathSpectrum: omega_c must be > 0");
  return BathSpectrum{kind, eta, omega_c};
}

std::vector<std::string> BathSpectrum::warnings(const FieldParams* field) const {
  std::vector<std::string> out;
  if (eta > 0.5) {
    std::ostringstream os;
    os << "eta = " << eta << " is outside the weak-coupling regime (eta << 1)";
    out.push_back(os.str());
  }
  if (field != nullptr && !(omega_c > field->B)) {
    std::ostringstream os;
    os << "omega_c = " << omega_c << " does not exceed B = " << field->B;
    out.push_back(os.str());
  }
  return out;
}

CutoffResonanceError::CutoffResonanceError(Level k, double transition, double omega_c)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "cutoff resonance for level " << to_string(k) << ": E_k - E_l = " << transition
           << " coincides with omega_c = " << omega_c;
        return os.str();
      }()),
      level_(k),
      transition_(transition) {}

double spectral_density(const BathSpectrum& spec, double omega) {
  if (omega < 0.0) throw std::invalid_argument("spectral_density: omega must be >= 0");
  if (omega > spec.omega_c) return 0.0;
  if (spec.kind == SpectrumKind::Ohmic) return spec.eta * omega;
  return spec.eta * omega * omega * omega;
}

namespace {

void require_ohmic(const BathSpectrum& spec, const char* what) {
  if (spec.kind != SpectrumKind::Ohmic)
    throw std::invalid_argument(std::string(what) + ": requires an Ohmic spectrum");
}

void guard_resonance(const FieldParams& field, const BathSpectrum& spec, Level k, double delta) {
  if (std::abs(delta - spec.omega_c) < cutoff_resonance_tolerance * field.B)
    throw CutoffResonanceError(k, delta, spec.omega_c);
}

// eta-free parts of Sigma_mk; E_l == E_k terms contribute nothing.
cplx self_energy_bracket(const FieldParams& field, const BathSpectrum& spec, Level m, Level k) {
  const auto energies = effective_energies(field);
  const double ek = energies[k];
  cplx acc = 0.0;
  for (Level l : both_levels) {
    const double delta = ek - energies[l];
    if (delta == 0.0) continue;
    guard_resonance(field, spec, k, delta);
    const double weight = sigma_z_element(field, m, l) * sigma_z_element(field, l, k);
    const double absorptive = delta > 0.0 ? delta : 0.0;
    const double dispersive = (delta / pi) * std::log(std::abs(spec.omega_c / delta - 1.0));
    acc += weight * cplx(dispersive, absorptive);
  }
  return acc;
}

}  // namespace

cplx self_energy(const FieldParams& field, const BathSpectrum& spec, Level m, Level k) {
  require_ohmic(spec, "self_energy");
  return spec.eta * self_energy_bracket(field, spec, m, k);
}

double decay_width(const FieldParams& field, const BathSpectrum& spec, Level k) {
  require_ohmic(spec, "decay_width");
  const auto energies = effective_energies(field);
  double half = 0.0;
  for (Level l : both_levels) {
    const double delta = energies[k] - energies[l];
    if (delta > 0.0) {
      const double v = sigma_z_element(field, k, l);
      half += v * v * delta;
    }
  }
  return 2.0 * (spec.eta * half);
}

double energy_shift(const FieldParams& field, const BathSpectrum& spec, Level k) {
  require_ohmic(spec, "energy_shift");
  // E^tot = E_k - Re Sigma_kk.
  return spec.eta * -self_energy_bracket(field, spec, k, k).real();
}

DissipativeLevel total_energy(const FieldParams& field, const BathSpectrum& spec, Level k) {
  DissipativeLevel d;
  d.level = k;
  d.bare_energy = effective_energies(field)[k];
  d.energy_shift = energy_shift(field, spec, k);
  d.width = decay_width(field, spec, k);
  return d;
}

Spinor dissipative_amplitude(const FieldParams& field, const DissipativeLevel& level, double t,
                             double t0) {
  if (t < t0) throw std::invalid_argument("dissipative_amplitude: t must be >= t0");
  const double elapsed = t - t0;
  const cplx factor = std::exp(cplx(-0.5 * level.width * elapsed, -level.total_energy() * elapsed));
  return factor * basis_pair(field, t)[level.level];
}

Spinor dissipative_amplitude(const FieldParams& field, const BathSpectrum& spec, Level level,
                             double t, double t0) {
  return dissipative_amplitude(field, total_energy(field, spec, level), t, t0);
}

}  // namespace gpd
