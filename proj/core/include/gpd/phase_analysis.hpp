#pragma once

// Dynamical / geometric split of the phase accumulated over one period, with and
// without dissipation.
//
// Convention: every phase here is Phi_l = Int_0^T E_l dt, i.e. the amplitude carries
// exp(-i Phi_l). spin_core's beta_l is the phase carried by the amplitude itself, so at
// eta = 0 the geometric parts satisfy Phi^BP_l == -beta_l (mod 2 pi).

#include <limits>
#include <string>
#include <vector>

#include "gpd/bath.hpp"
#include "gpd/spin_core.hpp"

namespace gpd {

struct PhaseBreakdown {
  Level level = Level::Plus;
  double dp_bare = 0.0;        // dissipationless dynamical phase over one period
  double dp_correction = 0.0;  // O(eta) dynamical correction
  double gp_bare = 0.0;        // dissipationless geometric phase
  double gp_correction = 0.0;  // O(eta) geometric correction

  double gp_total() const { return gp_bare + gp_correction; }
  double dp_total() const { return dp_bare + dp_correction; }
  double total() const { return dp_bare + dp_correction + gp_bare + gp_correction; }
  double total_wrapped() const { return wrap_phase(total()); }
};

struct AdiabaticPhases {
  PhaseBreakdown plus;
  PhaseBreakdown minus;
  std::vector<std::string> warnings;

  const PhaseBreakdown& operator[](Level l) const { return l == Level::Plus ? plus : minus; }
};

/// Dissipationless solid angle pi (1 - cos theta).
double solid_angle(double theta);

/// Adiabatic-limit phases over one period T = 2 pi/|omega0|:
///
///   Phi^DP_pm = -/+ B T/2 +/- (eta/pi) sin^2(theta) B T ln|1 +/- omega_c/B|
///   Phi^BP_pm = sign(omega0) [ +/- Omega -/+ 2 eta sin^2(theta) cos(theta) ln|1 +/- omega_c/B| ]
///
/// Throws std::domain_error for omega0 = 0 and CutoffResonanceError when omega_c = B.
/// Adds a warning (does not throw) when |omega0/B| >= 0.1.
AdiabaticPhases adiabatic_phases(const FieldParams& field, const BathSpectrum& spec);

struct DephasingReport {
  double tau_phi = std::numeric_limits<double>::infinity();  // +inf: dephasing free
  double gamma = 0.0;                                         // width of the upper level
  double feasibility_margin = 0.0;                            // |omega0| / (pi gamma)
  bool feasible = false;

  bool dephasing_free() const { return gamma == 0.0; }
};

/// Default ratio standing in for omega0 >> pi Gamma.
inline constexpr double default_feasibility_threshold = 10.0;

/// Builds a report from the upper-level width: tau_phi = 2/gamma, margin
/// |omega0|/(pi gamma) (infinite when gamma = 0, zero when omega0 = 0).
DephasingReport make_dephasing_report(double gamma, double omega0,
                                      double threshold = default_feasibility_threshold);

/// Adiabatic-limit dephasing rate 1/tau_phi:
///   Ohmic        eta sin^2(theta) (B - omega0 cos theta)
///   super-Ohmic  eta sin^2(theta) B^2 (B + omega0 cos theta)
double adiabatic_dephasing_rate(const FieldParams& field, const BathSpectrum& spec);

DephasingReport adiabatic_dephasing(const FieldParams& field, const BathSpectrum& spec,
                                    double threshold = default_feasibility_threshold);

struct LevelValues {
  double plus = 0.0;
  double minus = 0.0;
  double operator[](Level l) const { return l == Level::Plus ? plus : minus; }
};

/// Delta Phi^BP_pm = -/+ sign(omega0) 2 eta sin^2 cos (omega_c^2/2 - B^2 ln|1 +/- omega_c/B|).
LevelValues super_ohmic_bp_correction(const FieldParams& field, const BathSpectrum& spec);

/// Nonadiabatic solid angle Omega_{theta0} = pi [1 - cos(theta - theta0)].
double nonadiabatic_solid_angle(const FieldParams& field);

/// Omega_k = sign(omega0) (+/-) Omega_{theta0}: the dissipationless nonadiabatic GP.
double nonadiabatic_geometric_phase(const FieldParams& field, Level k);

/// T E_k^(geomet) = Omega_k + T [Delta E_k(omega0) - Delta E_k(omega0 = 0)], where
/// Delta E_k is the O(eta) shift and the reference point sets omega0 = 0 everywhere
/// (theta0 = 0, E_l = -/+ B/2). Throws std::domain_error for omega0 = 0; propagates
/// CutoffResonanceError.
double geometric_energy(const FieldParams& field, const BathSpectrum& spec, Level k);

/// Gamma_-/2 = eta sin^2(theta - theta0) [B cos theta0 + omega0 cos(theta - theta0)].
double nonadiabatic_width(const FieldParams& field, const BathSpectrum& spec);

DephasingReport nonadiabatic_dephasing(const FieldParams& field, const BathSpectrum& spec,
                                       double threshold = default_feasibility_threshold);

}  // namespace gpd
