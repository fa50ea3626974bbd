#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "gpd/density.hpp"
#include "gpd/oracle.hpp"
#include "gpd/phase_analysis.hpp"

namespace gpd::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
const std::string ok = "ok";
const std::string resonant = "cutoff_resonance";

// Evaluates fn(i) for i in [0, n) on a small thread pool. Results land in slot i, so the
// output order does not depend on scheduling. The first exception is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t count = std::min<std::size_t>(hw, std::max<std::size_t>(n, 1));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct Point {
  FieldConfig field;
  BathConfig bath;
  double signed_omega0() const { return field.rotation_sign * field.omega0_magnitude(); }
};

std::vector<Point> sweep_points(const RunConfig& c) {
  if (!c.sweep) return {{c.field, c.bath}};
  std::vector<Point> pts;
  for (double v : c.sweep->values()) {
    Point p{c.field, c.bath};
    if (c.sweep->name == "theta") {
      p.field.theta = v;
    } else if (c.sweep->name == "omega0_over_B") {
      p.field.omega0_over_B = v;
      p.field.period_s.reset();
    } else if (c.sweep->name == "eta") {
      p.bath.eta = v;
    } else {
      p.bath.omega_c_over_B = v;
    }
    pts.push_back(p);
  }
  return pts;
}

using Rows = std::vector<std::vector<Cell>>;

Table collect(std::vector<Column> columns, const std::vector<Rows>& per_point,
              const RunConfig& c) {
  Table t;
  t.columns = std::move(columns);
  for (const auto& rows : per_point)
    for (const auto& r : rows) t.add_row(r);
  if (!c.sweep) {
    const std::size_t status = t.column_index("status");
    for (const auto& r : t.rows)
      if (std::get<std::string>(r[status]) != ok)
        throw SingularityError("omega_c/B = " + format_number(c.bath.omega_c_over_B) +
                               " sits on a cutoff resonance; the one-loop logarithm diverges");
  }
  return t;
}

void add_warnings(Table& t, const std::vector<std::string>& ws) {
  for (const auto& w : ws)
    if (std::find(t.warnings.begin(), t.warnings.end(), w) == t.warnings.end())
      t.warnings.push_back(w);
}

std::string level_name(Level l) { return to_string(l); }

double seconds(double t, const FieldConfig& f) { return t / f.B_rad_per_s(); }

}  // namespace

Table cmd_exact(const RunConfig& c) {
  const auto pts = sweep_points(c);
  struct Values {
    double theta0, gap, period;
    LevelValues energy, beta, beta_quad;
  };
  const auto vals = parallel_map<Values>(pts.size(), [&](std::size_t i) {
    const FieldParams f = pts[i].field.params();
    const auto e = effective_energies(f);
    Values v{theta0(f), level_gap(f), f.period(), {e.e_plus, e.e_minus}, {}, {}};
    const double T = f.period();
    v.beta = {geometric_phase(f, Level::Plus, T), geometric_phase(f, Level::Minus, T)};
    v.beta_quad = {geometric_phase_quadrature(f, Level::Plus, T),
                   geometric_phase_quadrature(f, Level::Minus, T)};
    return v;
  });

  std::vector<double> up, um;
  for (const auto& v : vals) {
    up.push_back(v.beta.plus);
    um.push_back(v.beta.minus);
  }
  const auto unwrapped_p = unwrap_series(up, 0.0);
  const auto unwrapped_m = unwrap_series(um, 0.0);

  Table t;
  t.columns = {{"theta", "rad"},        {"omega0_over_B", "1"},  {"level", "-"},
               {"theta0", "rad"},       {"energy", "B"},         {"level_gap", "B"},
               {"period", "1/B"},       {"period_s", "s"},       {"beta", "rad"},
               {"beta_quadrature", "rad"}, {"beta_unwrapped", "rad"}};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& v = vals[i];
    for (Level l : both_levels) {
      t.add_row({pts[i].field.theta, pts[i].signed_omega0(), level_name(l), v.theta0,
                 v.energy[l], v.gap, v.period, seconds(v.period, pts[i].field), v.beta[l],
                 v.beta_quad[l], l == Level::Plus ? unwrapped_p[i] : unwrapped_m[i]});
    }
  }
  return t;
}

Table cmd_adiabatic(const RunConfig& c) {
  const auto pts = sweep_points(c);
  std::vector<std::vector<std::string>> warnings(pts.size());
  const auto rows = parallel_map<Rows>(pts.size(), [&](std::size_t i) {
    const auto& p = pts[i];
    const FieldParams f = p.field.params();
    const BathSpectrum s = p.bath.spectrum();
    const auto deph = adiabatic_dephasing(f, s);
    Rows out;
    auto row = [&](Level l, double dp_b, double dp_c, double gp_b, double gp_c,
                   const std::string& status) {
      return std::vector<Cell>{p.field.theta,
                               p.signed_omega0(),
                               p.bath.eta,
                               p.bath.omega_c_over_B,
                               to_string(p.bath.kind),
                               level_name(l),
                               dp_b,
                               dp_c,
                               gp_b,
                               gp_c,
                               gp_b + gp_c,
                               deph.tau_phi,
                               seconds(deph.tau_phi, p.field),
                               deph.feasibility_margin,
                               deph.feasible,
                               status};
    };
    // Bare parts from the dissipationless pipeline.
    const auto bare = adiabatic_phases(f, BathSpectrum::make(SpectrumKind::Ohmic, 0.0, 2.0));
    warnings[i] = bare.warnings;
    for (const auto& w : s.warnings(&f)) warnings[i].push_back(w);
    if (s.kind == SpectrumKind::SuperOhmic) {
      const auto corr = super_ohmic_bp_correction(f, s);
      for (Level l : both_levels)
        out.push_back(row(l, bare[l].dp_bare, nan, bare[l].gp_bare, corr[l], ok));
      return out;
    }
    try {
      const auto ph = adiabatic_phases(f, s);
      for (Level l : both_levels)
        out.push_back(row(l, ph[l].dp_bare, ph[l].dp_correction, ph[l].gp_bare,
                          ph[l].gp_correction, ok));
    } catch (const CutoffResonanceError&) {
      for (Level l : both_levels)
        out.push_back(row(l, bare[l].dp_bare, nan, bare[l].gp_bare, nan, resonant));
    }
    return out;
  });
  Table t = collect({{"theta", "rad"},
                     {"omega0_over_B", "1"},
                     {"eta", "1"},
                     {"omega_c_over_B", "1"},
                     {"bath_kind", "-"},
                     {"level", "-"},
                     {"dp_bare", "rad"},
                     {"dp_correction", "rad"},
                     {"gp_bare", "rad"},
                     {"gp_correction", "rad"},
                     {"gp_total", "rad"},
                     {"tau_phi", "1/B"},
                     {"tau_phi_s", "s"},
                     {"feasibility_margin", "1"},
                     {"feasible", "-"},
                     {"status", "-"}},
                    rows, c);
  for (const auto& w : warnings) add_warnings(t, w);
  return t;
}

Table cmd_nonadiabatic(const RunConfig& c) {
  const auto pts = sweep_points(c);
  std::vector<std::vector<std::string>> warnings(pts.size());
  const auto rows = parallel_map<Rows>(pts.size(), [&](std::size_t i) {
    const auto& p = pts[i];
    const FieldParams f = p.field.params();
    const BathSpectrum s = p.bath.spectrum();
    warnings[i] = s.warnings(&f);
    const auto deph = nonadiabatic_dephasing(f, s);
    Rows out;
    for (Level l : both_levels) {
      double te = nan, shift = nan;
      std::string status = ok;
      try {
        te = geometric_energy(f, s, l);
        shift = energy_shift(f, s, l);
      } catch (const CutoffResonanceError&) {
        status = resonant;
      }
      out.push_back({p.field.theta, p.signed_omega0(), p.bath.eta, p.bath.omega_c_over_B,
                     level_name(l), theta0(f), nonadiabatic_geometric_phase(f, l), te, shift,
                     decay_width(f, s, l), deph.tau_phi, seconds(deph.tau_phi, p.field),
                     deph.feasibility_margin, deph.feasible, status});
    }
    return out;
  });
  Table t = collect({{"theta", "rad"},
                     {"omega0_over_B", "1"},
                     {"eta", "1"},
                     {"omega_c_over_B", "1"},
                     {"level", "-"},
                     {"theta0", "rad"},
                     {"omega_k", "rad"},
                     {"te_geomet", "rad"},
                     {"energy_shift", "B"},
                     {"width", "B"},
                     {"tau_phi", "1/B"},
                     {"tau_phi_s", "s"},
                     {"feasibility_margin", "1"},
                     {"feasible", "-"},
                     {"status", "-"}},
                    rows, c);
  for (const auto& w : warnings) add_warnings(t, w);
  return t;
}

Table cmd_density(const RunConfig& c) {
  const FieldParams f = c.field.params();
  const BathSpectrum s = c.bath.spectrum();
  const SuperposedState st{cplx(c.density.a_re, c.density.a_im),
                           cplx(c.density.b_re, c.density.b_im)};
  const double gamma = decay_width(f, s, upper_level(f));
  Table t;
  t.columns = {{"t", "1/B"},
               {"t_seconds", "s"},
               {"trace", "1"},
               {"purity", "1"},
               {"coherence_magnitude", "1"},
               {"population_upper", "1"},
               {"population_lower", "1"}};
  double t_max = 0.0;
  if (gamma > 0.0) {
    t_max = c.density.t_max_over_tau * 2.0 / gamma;
  } else {
    t_max = c.density.t_max_over_tau * f.period();
    t.warnings.push_back("upper level does not decay; time grid spans t_max_over_tau periods");
  }
  add_warnings(t, s.warnings(&f));
  const int n = c.density.count;
  const auto rows = parallel_map<std::vector<Cell>>(
      static_cast<std::size_t>(n), [&](std::size_t i) {
        const double time = t_max * static_cast<double>(i) / (n - 1);
        const auto rho = reduced_density(st, f, s, time);
        return std::vector<Cell>{time,
                                 seconds(time, c.field),
                                 rho.trace(),
                                 rho.purity(),
                                 std::abs(rho.matrix(0, 1)),
                                 rho.population_upper(),
                                 rho.population_lower()};
      });
  for (const auto& r : rows) t.add_row(r);
  return t;
}

Table cmd_fig2(const RunConfig& c) {
  const int n = c.fig2.theta_count;
  const auto& wcs = c.fig2.omega_c_over_B;
  const double w0 = c.field.rotation_sign * c.field.omega0_magnitude();
  const auto rows =
      parallel_map<Rows>(wcs.size() * static_cast<std::size_t>(n), [&](std::size_t idx) {
        const double wc = wcs[idx / n];
        const double theta = pi * static_cast<double>(idx % n) / (n - 1);
        const FieldParams f = FieldParams::make(1.0, theta, w0);
        const BathSpectrum s = BathSpectrum::make(SpectrumKind::Ohmic, c.bath.eta, wc);
        Rows out;
        try {
          const auto ph = adiabatic_phases(f, s);
          for (Level l : both_levels)
            out.push_back({theta, wc, level_name(l), ph[l].gp_bare, ph[l].gp_correction,
                           ph[l].gp_total(), ok});
        } catch (const CutoffResonanceError&) {
          const auto bare =
              adiabatic_phases(f, BathSpectrum::make(SpectrumKind::Ohmic, 0.0, wc + 1.0));
          for (Level l : both_levels)
            out.push_back({theta, wc, level_name(l), bare[l].gp_bare, nan, nan, resonant});
        }
        return out;
      });
  Table t;
  t.columns = {{"theta", "rad"},        {"omega_c_over_B", "1"}, {"level", "-"},
               {"gp_bare", "rad"},      {"gp_correction", "rad"}, {"gp_total", "rad"},
               {"status", "-"}};
  for (const auto& rs : rows)
    for (const auto& r : rs) t.add_row(r);
  if (std::abs(w0) >= 0.1)
    t.warnings.push_back("|omega0/B| >= 0.1 is outside the adiabatic regime");
  return t;
}

Table cmd_fig3(const RunConfig& c) {
  const int n = c.fig3.theta_count;
  const auto& w0s = c.fig3.omega0_over_B;
  const double sgn = c.field.rotation_sign;
  const auto rows =
      parallel_map<Rows>(w0s.size() * static_cast<std::size_t>(n), [&](std::size_t idx) {
        const double w0 = w0s[idx / n];
        const double theta = pi * static_cast<double>(idx % n) / (n - 1);
        const FieldParams f = FieldParams::make(1.0, theta, sgn * w0);
        const BathSpectrum s = c.bath.spectrum();
        Rows out;
        for (Level l : both_levels) {
          double te = nan;
          std::string status = ok;
          try {
            te = geometric_energy(f, s, l);
          } catch (const CutoffResonanceError&) {
            status = resonant;
          }
          out.push_back(
              {theta, sgn * w0, level_name(l), nonadiabatic_geometric_phase(f, l), te, status});
        }
        return out;
      });
  Table t;
  t.columns = {{"theta", "rad"},   {"omega0_over_B", "1"}, {"level", "-"},
               {"omega_k", "rad"}, {"te_geomet", "rad"},   {"status", "-"}};
  for (const auto& rs : rows)
    for (const auto& r : rs) t.add_row(r);
  return t;
}

// ---------------------------------------------------------------------------------------

bool OracleReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

nlohmann::ordered_json OracleReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"error", std::isfinite(c.error) ? nlohmann::ordered_json(c.error)
                                                    : nlohmann::ordered_json(nullptr)},
                   {"error_kind", c.error_kind},
                   {"tolerance", c.tolerance},
                   {"wall_clock_s", c.wall_clock_s},
                   {"details", c.details}});
  }
  j["wall_clock_s"] = wall_clock_s;
  return j;
}

Table OracleReport::to_table() const {
  Table t;
  t.columns = {{"check", "-"},     {"passed", "-"},       {"error", "1"},
               {"error_kind", "-"}, {"tolerance", "1"}, {"wall_clock_s", "s"}};
  for (const auto& c : checks)
    t.add_row({c.name, c.passed, c.error, c.error_kind, c.tolerance, c.wall_clock_s});
  return t;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double ode_step(const FieldParams& f, const OracleConfig& q) {
  return std::min(f.period() / q.steps_per_period, q.max_step / f.B);
}

OracleCheck check_ode(const FieldParams& f, const OracleConfig& q) {
  const auto start = Clock::now();
  OracleCheck c{"ode_vs_closed_form", false, 0.0, q.ode_tolerance, "absolute", 0.0, {}};
  const double T = f.period();
  const double dt = ode_step(f, q);
  for (Level l : both_levels) {
    const auto traj = oracle::integrate_schrodinger(f, basis_pair(f, 0.0)[l], T, dt, 1 << 30);
    const double err = max_component_diff(traj.states.back(), exact_amplitude(f, l, T));
    c.details["error_" + std::string(l == Level::Plus ? "plus" : "minus")] = err;
    c.error = std::max(c.error, err);
  }
  c.details["dt"] = dt;
  c.details["period"] = T;
  c.passed = c.error < c.tolerance;
  c.wall_clock_s = since(start);
  return c;
}

OracleCheck check_aa(const FieldParams& f, const OracleConfig& q) {
  const auto start = Clock::now();
  OracleCheck c{"aa_vs_beta", false, 0.0, q.aa_tolerance, "absolute", 0.0, {}};
  const double T = f.period();
  const double dt = ode_step(f, q);
  for (Level l : both_levels) {
    const auto traj = oracle::integrate_schrodinger(f, basis_pair(f, 0.0)[l], T, dt);
    const double aa = oracle::aharonov_anandan_phase(traj);
    const double beta = cyclic_geometric_phase(f, l);
    const std::string tag = l == Level::Plus ? "plus" : "minus";
    c.details["aa_" + tag] = aa;
    c.details["beta_" + tag] = beta;
    c.error = std::max(c.error, phase_distance(aa, beta));
  }
  c.passed = c.error < c.tolerance;
  c.wall_clock_s = since(start);
  return c;
}

std::vector<OracleCheck> check_truncated_bath(const OracleConfig& q) {
  const auto start = Clock::now();
  const FieldParams f = FieldParams::make(1.0, q.theta, q.omega0_over_B);
  const BathSpectrum s = BathSpectrum::make(SpectrumKind::Ohmic, q.eta, q.omega_c_over_B);
  const auto bath = oracle::DiscretizedBath::uniform(s, q.modes);
  const auto res = oracle::simulate_truncated_bath(f, s, bath, q.t_final, q.dt);
  const auto fit = oracle::fit_exponential_window(res.amplitude, res.times, q.fit_t_min,
                                                  q.t_final);
  const auto lvl = total_energy(f, s, res.level);
  const double rate_ref = 0.5 * lvl.width;
  const double shift_measured = fit.frequency - lvl.bare_energy + bath.reorganization_energy();
  const double elapsed = since(start);

  nlohmann::ordered_json details{{"level", to_string(res.level)},
                                 {"modes", q.modes},
                                 {"fitted_rate", fit.rate},
                                 {"expected_rate", rate_ref},
                                 {"fitted_frequency", fit.frequency},
                                 {"bare_energy", lvl.bare_energy},
                                 {"reorganization_energy", bath.reorganization_energy()},
                                 {"measured_shift", shift_measured},
                                 {"expected_shift", lvl.energy_shift},
                                 {"double_excitation_estimate", res.double_excitation_estimate},
                                 {"truncation_warning", res.truncation_warning}};

  OracleCheck width{"truncated_bath_width", false, 0.0, q.width_tolerance, "relative", 0.0, {}};
  OracleCheck shift{"truncated_bath_shift", false, 0.0, q.shift_tolerance, "relative", 0.0, {}};
  if (q.eta == 0.0) {
    width.error_kind = shift.error_kind = "absolute";
    width.tolerance = shift.tolerance = q.zero_coupling_tolerance;
    width.error = std::abs(fit.rate);
    shift.error = std::abs(shift_measured);
  } else {
    width.error = std::abs(fit.rate / rate_ref - 1.0);
    shift.error = std::abs(shift_measured / lvl.energy_shift - 1.0);
  }
  width.passed = width.error < width.tolerance;
  shift.passed = shift.error < shift.tolerance;
  width.details = shift.details = details;
  width.wall_clock_s = shift.wall_clock_s = elapsed;
  return {width, shift};
}

}  // namespace

OracleReport cmd_oracle(const RunConfig& c) {
  const auto start = Clock::now();
  const FieldParams f = c.field.params();
  OracleReport r;
  r.checks.push_back(check_ode(f, c.oracle));
  r.checks.push_back(check_aa(f, c.oracle));
  for (auto& chk : check_truncated_bath(c.oracle)) r.checks.push_back(std::move(chk));
  r.wall_clock_s = since(start);
  return r;
}

}  // namespace gpd::cli
