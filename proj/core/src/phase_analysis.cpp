#include "gpd/phase_analysis.hpp"

#include <cmath>
#include <sstream>

namespace gpd {

namespace {

// ln|1 +/- omega_c/B| for level sign s.
double adiabatic_log(const FieldParams& field, const BathSpectrum& spec, Level level) {
  if (level == Level::Minus &&
      std::abs(spec.omega_c - field.B) < cutoff_resonance_tolerance * field.B)
    throw CutoffResonanceError(level, field.B, spec.omega_c);
  return std::log(std::abs(1.0 + level_sign(level) * spec.omega_c / field.B));
}

void require_kind(const BathSpectrum& spec, SpectrumKind kind, const char* what) {
  if (spec.kind != kind)
    throw std::invalid_argument(std::string(what) + ": requires a " + to_string(kind) +
                                " spectrum");
}

}  // namespace

double solid_angle(double theta) { return pi * (1.0 - std::cos(theta)); }

AdiabaticPhases adiabatic_phases(const FieldParams& field, const BathSpectrum& spec) {
  require_kind(spec, SpectrumKind::Ohmic, "adiabatic_phases");
  const double T = field.period();
  const double sgn = field.rotation_sign();
  const double s2 = std::sin(field.theta) * std::sin(field.theta);
  const double c = std::cos(field.theta);
  const double omega = solid_angle(field.theta);

  AdiabaticPhases out;
  if (std::abs(field.omega0 / field.B) >= 0.1) {
    std::ostringstream os;
    os << "|omega0/B| = " << std::abs(field.omega0 / field.B)
       << " is outside the adiabatic regime (|omega0/B| << 1)";
    out.warnings.push_back(os.str());
  }
  for (const auto& w : spec.warnings(&field)) out.warnings.push_back(w);

  for (Level l : both_levels) {
    const double s = level_sign(l);
    const double lg = adiabatic_log(field, spec, l);
    PhaseBreakdown p;
    p.level = l;
    p.dp_bare = -s * 0.5 * field.B * T;
    p.dp_correction = s * (spec.eta * (s2 * field.B * T * lg / pi));
    p.gp_bare = sgn * s * omega;
    p.gp_correction = -sgn * s * (spec.eta * (2.0 * s2 * c * lg));
    (l == Level::Plus ? out.plus : out.minus) = p;
  }
  return out;
}

DephasingReport make_dephasing_report(double gamma, double omega0, double threshold) {
  DephasingReport r;
  r.gamma = gamma;
  if (gamma > 0.0) {
    r.tau_phi = 2.0 / gamma;
    r.feasibility_margin = std::abs(omega0) / (pi * gamma);
  } else {
    r.tau_phi = std::numeric_limits<double>::infinity();
    r.feasibility_margin = omega0 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  r.feasible = r.feasibility_margin > threshold;
  return r;
}

double adiabatic_dephasing_rate(const FieldParams& field, const BathSpectrum& spec) {
  const double s2 = std::sin(field.theta) * std::sin(field.theta);
  const double c = std::cos(field.theta);
  if (spec.kind == SpectrumKind::Ohmic)
    return spec.eta * (s2 * (field.B - field.omega0 * c));
  return spec.eta * (s2 * field.B * field.B * (field.B + field.omega0 * c));
}

DephasingReport adiabatic_dephasing(const FieldParams& field, const BathSpectrum& spec,
                                    double threshold) {
  const double rate = adiabatic_dephasing_rate(field, spec);
  return make_dephasing_report(std::max(2.0 * rate, 0.0), field.omega0, threshold);
}

LevelValues super_ohmic_bp_correction(const FieldParams& field, const BathSpectrum& spec) {
  require_kind(spec, SpectrumKind::SuperOhmic, "super_ohmic_bp_correction");
  const double sgn = field.rotation_sign();
  const double s = std::sin(field.theta);
  const double geom = 2.0 * s * s * std::cos(field.theta);
  const double b2 = field.B * field.B;
  const double half_wc2 = 0.5 * spec.omega_c * spec.omega_c;
  LevelValues out;
  out.plus = -sgn * (spec.eta * (geom * (half_wc2 - b2 * adiabatic_log(field, spec, Level::Plus))));
  out.minus = sgn * (spec.eta * (geom * (half_wc2 - b2 * adiabatic_log(field, spec, Level::Minus))));
  return out;
}

double nonadiabatic_solid_angle(const FieldParams& field) {
  return pi * (1.0 - std::cos(field.theta - theta0(field)));
}

double nonadiabatic_geometric_phase(const FieldParams& field, Level k) {
  return field.rotation_sign() * level_sign(k) * nonadiabatic_solid_angle(field);
}

double geometric_energy(const FieldParams& field, const BathSpectrum& spec, Level k) {
  const double T = field.period();
  const FieldParams reference{field.B, field.theta, 0.0};
  const double shift = energy_shift(field, spec, k);
  const double shift_ref = energy_shift(reference, spec, k);
  return nonadiabatic_geometric_phase(field, k) + T * (shift - shift_ref);
}

double nonadiabatic_width(const FieldParams& field, const BathSpectrum& spec) {
  require_kind(spec, SpectrumKind::Ohmic, "nonadiabatic_width");
  const double t0 = theta0(field);
  const double vt = field.theta - t0;
  const double sv = std::sin(vt);
  return 2.0 * (spec.eta * (sv * sv * (field.B * std::cos(t0) + field.omega0 * std::cos(vt))));
}

DephasingReport nonadiabatic_dephasing(const FieldParams& field, const BathSpectrum& spec,
                                       double threshold) {
  return make_dephasing_report(std::max(nonadiabatic_width(field, spec), 0.0), field.omega0,
                               threshold);
}

}  // namespace gpd
