#pragma once

// Exact dissipationless solution of a spin-1/2 in a field of constant strength B and
// polar angle theta, rotating about z with angular velocity omega0:
//
//   B(t) = B (sin theta cos(omega0 t), sin theta sin(omega0 t), cos theta),
//   h(t) = -B(t).sigma / 2                                  (hbar = 1).
//
// In the co-rotating basis w_+/w_- the effective Hamiltonian is diagonal and time
// independent, so psi_l(t) = w_l(t) exp(-i E_l t) is exact for every omega0/B.

#include <span>
#include <string>
#include <vector>

#include "gpd/spinor.hpp"

namespace gpd {

enum class Level { Plus, Minus };

/// +1 for Level::Plus, -1 for Level::Minus.
constexpr double level_sign(Level l) { return l == Level::Plus ? 1.0 : -1.0; }
constexpr Level other(Level l) { return l == Level::Plus ? Level::Minus : Level::Plus; }
std::string to_string(Level l);  // "+" or "-"

inline constexpr std::array<Level, 2> both_levels{Level::Plus, Level::Minus};

struct FieldParams {
  double B = 1.0;       // field strength (angular frequency units), > 0
  double theta = 0.0;   // polar angle in [0, pi]
  double omega0 = 0.0;  // signed rotation rate

  /// Validating constructor; throws std::invalid_argument on B <= 0, theta outside
  /// [0, pi] or non-finite input.
  static FieldParams make(double B, double theta, double omega0);

  /// 2 pi / |omega0|. Throws std::domain_error for a static field.
  double period() const;
  double rotation_sign() const { return omega0 < 0.0 ? -1.0 : 1.0; }

  /// Cartesian field vector at time t.
  std::array<double, 3> field_vector(double t) const;

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

/// Tilt of the co-rotating eigenframe: atan2(omega0 sin theta, B + omega0 cos theta).
/// Continuous through omega0 = 0 and tends to theta as |omega0|/B grows.
double theta0(const FieldParams& field);

/// Quasi-energy gap E_- - E_+ = sqrt(B^2 + omega0^2 + 2 B omega0 cos theta) >= 0.
double level_gap(const FieldParams& field);

struct BasisPair {
  Spinor w_plus;
  Spinor w_minus;
  double vartheta = 0.0;  // theta - theta0
  double phi = 0.0;       // omega0 t

  const Spinor& operator[](Level l) const { return l == Level::Plus ? w_plus : w_minus; }
};

BasisPair basis_pair(const FieldParams& field, double t);

/// <w_m|sigma_z|w_l> from the closed forms: cos(vartheta) on the diagonal (with the
/// level sign), sin(vartheta) off the diagonal. Time independent and real.
double sigma_z_element(const FieldParams& field, Level m, Level l);

struct EffectiveEnergies {
  double e_plus = 0.0;
  double e_minus = 0.0;

  double operator[](Level l) const { return l == Level::Plus ? e_plus : e_minus; }
};

/// E_pm = -/+ (B/2) cos theta0 - (omega0/2) [1 +/- cos(theta - theta0)].
EffectiveEnergies effective_energies(const FieldParams& field);

/// The level with the larger effective energy (Level::Minus for every non-degenerate
/// field, since E_- - E_+ = level_gap >= 0).
Level upper_level(const FieldParams& field);
inline Level lower_level(const FieldParams& field) { return other(upper_level(field)); }

/// <w_l| i d/dt |w_l> = (omega0/2)(1 +/- cos vartheta).
double geometric_energy_bare(const FieldParams& field, Level level);

/// psi_l(t) = w_l(t) exp(-i E_l t); solves i dpsi/dt = h psi with psi(0) = w_l(0).
Spinor exact_amplitude(const FieldParams& field, Level level, double t);

/// Basis trajectory w_l(t_i) on `nodes`+1 uniformly spaced times t_i = i t_final / nodes.
std::vector<Spinor> basis_trajectory(const FieldParams& field, Level level, double t_final,
                                     int nodes);

/// Lattice (Bargmann) form of arg{ v_0^dag v_N exp[i Int v^dag i d/dt v dt] }:
///
///   beta = arg(v_0^dag v_N) - sum_i arg(v_i^dag v_{i+1}).
///
/// Exactly invariant under v_i -> exp(i alpha_i) v_i as long as neighbouring samples
/// differ in gauge by less than pi. Result in (-pi, pi].
double lattice_geometric_phase(std::span<const Spinor> path);

/// beta_l over [0, t_final] from the analytic integrand: arg(w_l(0)^dag w_l(t_final))
/// + t_final <w_l|i d/dt|w_l>. At t_final = T this is sign(omega0) pi (1 +/- cos vartheta).
/// Throws std::invalid_argument for t_final <= 0.
double geometric_phase(const FieldParams& field, Level level, double t_final);

/// Same quantity by lattice quadrature over the discretised basis trajectory.
double geometric_phase_quadrature(const FieldParams& field, Level level, double t_final,
                                  int nodes = 4096);

/// sign(omega0) pi [1 +/- cos(theta - theta0)] reduced to (-pi, pi].
double cyclic_geometric_phase(const FieldParams& field, Level level);

}  // namespace gpd
