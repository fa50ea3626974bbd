#include "gpd/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace gpd::oracle {

namespace {

std::int64_t step_count(double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final > 0.0))
    throw std::invalid_argument("integration: dt and t_final must be > 0");
  const double ratio = t_final / dt;
  if (!(ratio <= static_cast<double>(max_steps)))
    throw std::invalid_argument("integration: step count exceeds 1e8");
  const double nearest = std::round(ratio);
  const double n = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest
                                                                          : std::ceil(ratio);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

// Cartesian field with sin(theta), cos(theta) hoisted out of the step loop.
struct FieldSampler {
  double bxy, bz, omega0;
  explicit FieldSampler(const FieldParams& f)
      : bxy(f.B * std::sin(f.theta)), bz(f.B * std::cos(f.theta)), omega0(f.omega0) {}
  std::array<double, 3> operator()(double t) const {
    const double phi = omega0 * t;
    return {bxy * std::cos(phi), bxy * std::sin(phi), bz};
  }
};

cplx times_minus_i(cplx z) { return {z.imag(), -z.real()}; }

// -i h psi with h = -b.sigma/2, written out so no general complex product is needed.
Spinor schrodinger_rhs(const std::array<double, 3>& b, const Spinor& psi) {
  const double ur = psi.up.real(), ui = psi.up.imag();
  const double dr = psi.down.real(), di = psi.down.imag();
  // h psi
  const cplx hu(-0.5 * (b[2] * ur + b[0] * dr + b[1] * di),
                -0.5 * (b[2] * ui + b[0] * di - b[1] * dr));
  const cplx hd(-0.5 * (b[0] * ur - b[1] * ui - b[2] * dr),
                -0.5 * (b[0] * ui + b[1] * ur - b[2] * di));
  return {times_minus_i(hu), times_minus_i(hd)};
}

}  // namespace

Trajectory integrate_schrodinger(const FieldParams& field, const Spinor& psi0, double t_final,
                                 double dt, int store_every) {
  if (store_every < 1) throw std::invalid_argument("integrate_schrodinger: store_every < 1");
  const std::int64_t n = step_count(t_final, dt);
  const double h = t_final / static_cast<double>(n);

  Trajectory traj;
  const auto stored = static_cast<std::size_t>(n / store_every + 2);
  traj.times.reserve(stored);
  traj.states.reserve(stored);
  traj.times.push_back(0.0);
  traj.states.push_back(psi0);

  const FieldSampler sample(field);
  Spinor psi = psi0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i);
    const auto b0 = sample(t);
    const auto b1 = sample(t + 0.5 * h);
    const auto b2 = sample(t + h);
    const Spinor k1 = schrodinger_rhs(b0, psi);
    const Spinor k2 = schrodinger_rhs(b1, psi + (0.5 * h) * k1);
    const Spinor k3 = schrodinger_rhs(b1, psi + (0.5 * h) * k2);
    const Spinor k4 = schrodinger_rhs(b2, psi + h * k3);
    psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((i + 1) % store_every == 0 || i + 1 == n) {
      traj.times.push_back(i + 1 == n ? t_final : h * static_cast<double>(i + 1));
      traj.states.push_back(psi);
    }
  }
  return traj;
}

double aharonov_anandan_phase(const Trajectory& traj) {
  if (traj.states.size() < 2)
    throw std::invalid_argument("aharonov_anandan_phase: need >= 2 states");
  const Spinor& first = traj.states.front();
  const Spinor& last = traj.states.back();
  const double overlap = std::abs(inner(first, last)) / (norm(first) * norm(last));
  if (!(overlap > 1e-6))
    throw std::domain_error("aharonov_anandan_phase: endpoint orthogonal to initial state");
  return lattice_geometric_phase(traj.states);
}

cplx sigma_z_element_direct(const FieldParams& field, Level m, Level l, double t) {
  const auto basis = basis_pair(field, t);
  return matrix_element(basis[m], pauli::z(), basis[l]);
}

cplx self_energy_direct(const FieldParams& field, const BathSpectrum& spec, Level m, Level k) {
  if (spec.kind != SpectrumKind::Ohmic)
    throw std::invalid_argument("self_energy_direct: requires an Ohmic spectrum");
  const auto e = effective_energies(field);
  cplx acc = 0.0;
  for (Level l : both_levels) {
    const double delta = e[k] - e[l];
    if (delta == 0.0) continue;
    if (std::abs(delta - spec.omega_c) < cutoff_resonance_tolerance * field.B)
      throw CutoffResonanceError(k, delta, spec.omega_c);
    const cplx weight = sigma_z_element_direct(field, m, l) * sigma_z_element_direct(field, l, k);
    const double im = delta > 0.0 ? delta : 0.0;
    const double re = -((e[l] - e[k]) / pi) * std::log(std::abs(spec.omega_c / delta - 1.0));
    acc += weight * cplx(re, im);
  }
  return spec.eta * acc;
}

double decay_width_direct(const FieldParams& field, const BathSpectrum& spec, Level k) {
  if (spec.kind != SpectrumKind::Ohmic)
    throw std::invalid_argument("decay_width_direct: requires an Ohmic spectrum");
  const auto e = effective_energies(field);
  double half = 0.0;
  for (Level l : both_levels) {
    const double delta = e[k] - e[l];
    if (delta > 0.0) half += std::norm(sigma_z_element_direct(field, k, l)) * delta;
  }
  return 2.0 * spec.eta * half;
}

DiscretizedBath DiscretizedBath::uniform(const BathSpectrum& spec, int modes) {
  if (modes < 1) throw std::invalid_argument("DiscretizedBath: mode count must be >= 1");
  DiscretizedBath bath;
  bath.mode_count = modes;
  bath.frequencies.resize(static_cast<std::size_t>(modes));
  bath.couplings.resize(static_cast<std::size_t>(modes));
  const double d_omega = spec.omega_c / modes;
  for (int a = 0; a < modes; ++a) {
    const double w = d_omega * (a + 1);
    bath.frequencies[static_cast<std::size_t>(a)] = w;
    bath.couplings[static_cast<std::size_t>(a)] =
        std::sqrt(spectral_density(spec, std::min(w, spec.omega_c)) * d_omega / pi);
  }
  return bath;
}

double DiscretizedBath::reorganization_energy() const {
  double s = 0.0;
  for (std::size_t a = 0; a < frequencies.size(); ++a)
    s += couplings[a] * couplings[a] / frequencies[a];
  return s;
}

std::vector<DiscretizedBath::Bin> DiscretizedBath::reconstruct_density(double omega_c,
                                                                       int bins) const {
  if (bins < 1) throw std::invalid_argument("reconstruct_density: bins must be >= 1");
  const double width = omega_c / bins;
  std::vector<Bin> out(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) out[static_cast<std::size_t>(b)].center = width * (b + 0.5);
  for (std::size_t a = 0; a < frequencies.size(); ++a) {
    // Bins are (lo, hi] so that omega_c itself falls in the last one.
    int b = static_cast<int>(std::ceil(frequencies[a] / width)) - 1;
    b = std::clamp(b, 0, bins - 1);
    out[static_cast<std::size_t>(b)].density += pi * couplings[a] * couplings[a] / width;
  }
  return out;
}

namespace {

// Single-excitation sector: index 0..1 = |l; vac>, 2 + m*M + alpha = |m; 1_alpha>.
struct SectorHamiltonian {
  std::array<double, 2> energy{};  // shifted by `offset`
  std::array<std::array<cplx, 2>, 2> v{};  // <w_m|sz|w_l>
  const DiscretizedBath* bath = nullptr;
  std::size_t modes = 0;

  void apply(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    const auto& g = bath->couplings;
    const auto& w = bath->frequencies;
    const cplx minus_i(0.0, -1.0);
    out[0] = energy[0] * in[0];
    out[1] = energy[1] * in[1];
    for (int m = 0; m < 2; ++m) {
      const std::size_t base = 2 + static_cast<std::size_t>(m) * modes;
      // <m;1_a|H|k;vac> = -i g_a v_mk
      const cplx c0 = minus_i * v[m][0];
      const cplx c1 = minus_i * v[m][1];
      const cplx source = c0 * in[0] + c1 * in[1];
      cplx back = 0.0;
      for (std::size_t a = 0; a < modes; ++a) {
        const cplx x = in[base + a];
        out[base + a] = (energy[m] + w[a]) * x + g[a] * source;
        back += g[a] * x;
      }
      // <k;vac|H|m;1_a> = conj(-i g_a v_mk)
      out[0] += std::conj(c0) * back;
      out[1] += std::conj(c1) * back;
    }
  }
};

void axpy(std::vector<cplx>& y, const std::vector<cplx>& x, cplx s, const std::vector<cplx>& base) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = base[i] + s * x[i];
}

}  // namespace

TruncatedBathResult simulate_truncated_bath(const FieldParams& field, const BathSpectrum& spec,
                                            const DiscretizedBath& bath, double t_final,
                                            double dt, Level initial, int sample_every) {
  if (spec.kind != SpectrumKind::Ohmic)
    throw std::invalid_argument("simulate_truncated_bath: requires an Ohmic spectrum");
  if (sample_every < 1) throw std::invalid_argument("simulate_truncated_bath: sample_every < 1");
  const std::int64_t n = step_count(t_final, dt);
  const double h = t_final / static_cast<double>(n);

  const auto e = effective_energies(field);
  const double offset = e[initial];
  SectorHamiltonian ham;
  ham.bath = &bath;
  ham.modes = static_cast<std::size_t>(bath.mode_count);
  for (Level m : both_levels) {
    const int mi = m == Level::Plus ? 0 : 1;
    ham.energy[mi] = e[m] - offset;
    for (Level l : both_levels) {
      const int li = l == Level::Plus ? 0 : 1;
      ham.v[mi][li] = sigma_z_element_direct(field, m, l);
    }
  }

  const std::size_t dim = 2 + 2 * ham.modes;
  const std::size_t start = initial == Level::Plus ? 0 : 1;
  std::vector<cplx> psi(dim, 0.0), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  psi[start] = 1.0;

  auto one_boson = [&](int m) {
    double p = 0.0;
    const std::size_t base = 2 + static_cast<std::size_t>(m) * ham.modes;
    for (std::size_t a = 0; a < ham.modes; ++a) p += std::norm(psi[base + a]);
    return p;
  };

  TruncatedBathResult res;
  res.level = initial;
  res.times.push_back(0.0);
  res.amplitude.push_back(1.0);
  std::array<double, 2> p1_max{0.0, 0.0};

  const cplx mi(0.0, -1.0);
  for (std::int64_t i = 0; i < n; ++i) {
    ham.apply(psi, k1);
    for (auto& x : k1) x *= mi;
    axpy(tmp, k1, 0.5 * h, psi);
    ham.apply(tmp, k2);
    for (auto& x : k2) x *= mi;
    axpy(tmp, k2, 0.5 * h, psi);
    ham.apply(tmp, k3);
    for (auto& x : k3) x *= mi;
    axpy(tmp, k3, h, psi);
    ham.apply(tmp, k4);
    for (auto& x : k4) x *= mi;
    for (std::size_t j = 0; j < dim; ++j)
      psi[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);

    if ((i + 1) % sample_every == 0 || i + 1 == n) {
      const double t = i + 1 == n ? t_final : h * static_cast<double>(i + 1);
      res.times.push_back(t);
      res.amplitude.push_back(std::polar(1.0, -offset * t) * psi[start]);
      p1_max[0] = std::max(p1_max[0], one_boson(0));
      p1_max[1] = std::max(p1_max[1], one_boson(1));
    }
  }

  res.one_boson_population_max = std::max(p1_max[0], p1_max[1]);
  double estimate = 0.0;
  for (Level m : both_levels) {
    const int mi_idx = m == Level::Plus ? 0 : 1;
    double weight = 0.0;
    for (Level l : both_levels) {
      const double gap = e[l] - e[m];
      if (gap < 0.0) continue;  // real emission channel, not virtual dressing
      double s = 0.0;
      for (std::size_t a = 0; a < ham.modes; ++a) {
        const double den = bath.frequencies[a] + gap;
        s += bath.couplings[a] * bath.couplings[a] / (den * den);
      }
      weight += std::norm(sigma_z_element_direct(field, m, l)) * s;
    }
    estimate += p1_max[static_cast<std::size_t>(mi_idx)] * weight;
  }
  res.double_excitation_estimate = estimate;
  res.truncation_warning = estimate > 0.01;
  return res;
}

TruncatedBathResult simulate_truncated_bath(const FieldParams& field, const BathSpectrum& spec,
                                            const DiscretizedBath& bath, double t_final,
                                            double dt) {
  return simulate_truncated_bath(field, spec, bath, t_final, dt, upper_level(field));
}

ExponentialFit fit_exponential(std::span<const cplx> series, std::span<const double> times) {
  if (series.size() != times.size())
    throw std::invalid_argument("fit_exponential: series and times differ in length");
  if (series.size() < 10) throw std::invalid_argument("fit_exponential: need >= 10 samples");

  const std::size_t n = series.size();
  std::vector<double> log_mag(n), phase(n);
  ExponentialFit fit;
  fit.samples = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::abs(series[i]);
    if (!(mag > 0.0)) throw std::invalid_argument("fit_exponential: non-positive magnitude");
    log_mag[i] = std::log(mag);
    phase[i] = std::arg(series[i]);
    if (i > 0 && mag > std::abs(series[i - 1]) * (1.0 + 1e-12)) fit.monotone = false;
  }
  const auto unwrapped = unwrap_series(phase, phase.front());

  double t_mean = 0.0;
  for (double t : times) t_mean += t;
  t_mean /= static_cast<double>(n);

  auto line = [&](const std::vector<double>& y, double& rms) {
    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = times[i] - t_mean;
      sxy += dx * (y[i] - y_mean);
      sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (y_mean + slope * (times[i] - t_mean));
      ss += r * r;
    }
    rms = std::sqrt(ss / static_cast<double>(n));
    return slope;
  };

  fit.rate = -line(log_mag, fit.magnitude_residual);
  fit.frequency = -line(unwrapped, fit.phase_residual);
  fit.decaying = fit.rate > 0.0;
  return fit;
}

ExponentialFit fit_exponential_window(std::span<const cplx> series,
                                      std::span<const double> times, double t_min,
                                      double t_max) {
  if (series.size() != times.size())
    throw std::invalid_argument("fit_exponential_window: series and times differ in length");
  std::vector<cplx> s;
  std::vector<double> t;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t_min && times[i] <= t_max) {
      s.push_back(series[i]);
      t.push_back(times[i]);
    }
  }
  return fit_exponential(s, t);
}

}  // namespace gpd::oracle
