#pragma once

// Independent numerical ground truth for the closed forms in spin_core, bath and
// density. Nothing here uses the co-rotating energies or the closed-form matrix elements
// except where stated (the truncated-bath simulator needs the basis to define its
// Hamiltonian, but evolves it non-perturbatively).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gpd/bath.hpp"
#include "gpd/spin_core.hpp"

namespace gpd::oracle {

struct Trajectory {
  std::vector<double> times;
  std::vector<Spinor> states;
};

/// Upper bound on the number of integration steps.
inline constexpr std::int64_t max_steps = 100'000'000;

/// Fixed-step classical RK4 for i dpsi/dt = -(B(t).sigma/2) psi, with h(t) assembled from
/// the Cartesian field vector. The step is adjusted to t_final/n with n = ceil(t_final/dt)
/// (rounded to the nearest integer when within 1e-9 of it). Every `store_every`-th state
/// and the endpoint are recorded.
Trajectory integrate_schrodinger(const FieldParams& field, const Spinor& psi0, double t_final,
                                 double dt, int store_every = 1);

/// beta = arg{psi(0)^dag psi(t_f) exp[i Int psi^dag i d/dt psi dt]} by the lattice product
/// form. Throws std::domain_error when |psi(0)^dag psi(t_f)| <= 1e-6 (normalised).
double aharonov_anandan_phase(const Trajectory& traj);

/// <w_m(t)|sigma_z|w_l(t)> by explicit 2x2 algebra on the basis vectors.
cplx sigma_z_element_direct(const FieldParams& field, Level m, Level l, double t = 0.0);

/// One-loop Sigma_mk and Gamma_k rebuilt from the direct matrix elements (Ohmic only).
cplx self_energy_direct(const FieldParams& field, const BathSpectrum& spec, Level m, Level k);
double decay_width_direct(const FieldParams& field, const BathSpectrum& spec, Level k);

struct DiscretizedBath {
  int mode_count = 0;
  std::vector<double> frequencies;  // omega_alpha
  std::vector<double> couplings;    // g_alpha, with pi sum g^2 delta(omega - omega_alpha) ~ J

  /// omega_alpha = alpha omega_c / M (alpha = 1..M), g_alpha^2 = J(omega_alpha) d_omega / pi.
  static DiscretizedBath uniform(const BathSpectrum& spec, int modes);

  /// Sum_alpha g_alpha^2 / omega_alpha: the level-independent part of the second-order
  /// shift that the one-loop logarithm leaves out.
  double reorganization_energy() const;

  struct Bin {
    double center = 0.0;
    double density = 0.0;  // pi sum_{alpha in bin} g_alpha^2 / width
  };
  /// Histogram reconstruction of J on `bins` equal bins over (0, omega_c].
  std::vector<Bin> reconstruct_density(double omega_c, int bins) const;
};

struct TruncatedBathResult {
  std::vector<double> times;
  std::vector<cplx> amplitude;  // <k; vac| U(t) |k; vac>
  Level level = Level::Minus;
  double one_boson_population_max = 0.0;
  double double_excitation_estimate = 0.0;
  bool truncation_warning = false;
};

/// Evolves |k; vac> in the (2 + 2M)-dimensional sector {|l; vac>, |l; 1_alpha>} under
///   H = sum_l E_l |l><l| + sum_alpha omega_alpha a^dag a
///       + sum_{alpha,m,l} g_alpha i (a - a^dag) <w_m|sz|w_l> |m><l|
/// (counter-rotating terms that leave the sector are dropped) with fixed-step RK4 and
/// samples the persistent amplitude every `sample_every` steps. The double-excitation
/// estimate is the virtual-dressing weight sum_m P1_m sum_{l: E_l >= E_m}
/// |<w_m|sz|w_l>|^2 sum_b g_b^2/(omega_b + E_l - E_m)^2; a warning is raised above 1%.
TruncatedBathResult simulate_truncated_bath(const FieldParams& field, const BathSpectrum& spec,
                                            const DiscretizedBath& bath, double t_final,
                                            double dt, Level initial, int sample_every = 10);

/// Convenience overload starting on the upper level.
TruncatedBathResult simulate_truncated_bath(const FieldParams& field, const BathSpectrum& spec,
                                            const DiscretizedBath& bath, double t_final,
                                            double dt);

struct ExponentialFit {
  double rate = 0.0;       // series ~ exp[(-rate - i frequency) t]
  double frequency = 0.0;
  double magnitude_residual = 0.0;  // rms of ln|z| about the fit
  double phase_residual = 0.0;      // rms of unwrapped arg z about the fit
  bool decaying = false;
  bool monotone = true;
  std::size_t samples = 0;
};

/// Log-linear least squares on |z| and linear least squares on the unwrapped phase.
/// Throws std::invalid_argument for fewer than 10 samples, mismatched lengths or a
/// non-positive magnitude. Non-decaying or non-monotone input is flagged, not rejected.
ExponentialFit fit_exponential(std::span<const cplx> series, std::span<const double> times);

/// Restricts a sampled series to times in [t_min, t_max] before fitting.
ExponentialFit fit_exponential_window(std::span<const cplx> series,
                                      std::span<const double> times, double t_min,
                                      double t_max);

}  // namespace gpd::oracle
