#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gpd/oracle.hpp"
#include "test_support.hpp"

using namespace gpd;
using namespace gpd::oracle;

namespace {

BathSpectrum ohmic(double eta, double omega_c) {
  return BathSpectrum::make(SpectrumKind::Ohmic, eta, omega_c);
}

double endpoint_error(const FieldParams& f, Level l, double dt) {
  const double T = f.period();
  const auto traj = integrate_schrodinger(f, basis_pair(f, 0.0)[l], T, dt);
  return max_component_diff(traj.states.back(), exact_amplitude(f, l, T));
}

}  // namespace

TEST_CASE("RK4 reproduces the exact amplitude over one period", "[oracle][rk4]") {
  const auto f = FieldParams::make(1.0, 1.0, 0.3);
  const double T = f.period();
  for (Level l : both_levels) {
    CHECK(endpoint_error(f, l, T / 1e4) < 1e-8);
    const auto traj = integrate_schrodinger(f, basis_pair(f, 0.0)[l], T, T / 1e4);
    CHECK(std::abs(norm(traj.states.back()) - 1.0) < 1e-10);
    CHECK(traj.times.size() == traj.states.size());
    CHECK(traj.times.back() == T);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  }
}

TEST_CASE("RK4 static field closed form", "[oracle][rk4]") {
  const auto f = FieldParams::make(1.3, 0.0, 0.7);
  const Spinor psi0{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  const double t = 9.0;
  const auto traj = integrate_schrodinger(f, psi0, t, 1e-3);
  const Spinor expected{std::polar(1.0, 1.3 * t / 2) * psi0.up,
                        std::polar(1.0, -1.3 * t / 2) * psi0.down};
  CHECK(max_component_diff(traj.states.back(), expected) < 1e-11);
}

TEST_CASE("RK4 converges at fourth order", "[oracle][rk4]") {
  const auto f = FieldParams::make(1.0, pi / 3, 0.2);
  const double T = f.period();
  const double coarse = endpoint_error(f, Level::Plus, T / 500);
  const double fine = endpoint_error(f, Level::Plus, T / 1000);
  CHECK(coarse / fine > 14.0);
  CHECK(coarse / fine < 18.0);
}

TEST_CASE("RK4 norm drift per period", "[oracle][rk4][property]") {
  gpd::testing::FieldGenerator gen(404);
  for (int i = 0; i < 10; ++i) {
    const auto f = gen.next(0.05, 10.0);
    const double T = f.period();
    const auto traj = integrate_schrodinger(f, {1.0, 0.0}, T, T / 1e4, 1000);
    CHECK(std::abs(norm(traj.states.back()) - 1.0) < 1e-10);
  }
}

TEST_CASE("RK4 input validation", "[oracle][rk4]") {
  const auto f = FieldParams::make(1.0, 1.0, 0.3);
  CHECK_THROWS_AS(integrate_schrodinger(f, {1.0, 0.0}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_schrodinger(f, {1.0, 0.0}, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(integrate_schrodinger(f, {1.0, 0.0}, 1e3, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(integrate_schrodinger(f, {1.0, 0.0}, 1.0, 0.1, 0), std::invalid_argument);
  // A step that does not divide t_final is shortened so the endpoint is hit exactly.
  const auto traj = integrate_schrodinger(f, {1.0, 0.0}, 1.0, 0.3);
  CHECK(traj.times.size() == 5);
  CHECK(traj.times.back() == 1.0);
}

TEST_CASE("Aharonov-Anandan phase of RK4 trajectories", "[oracle][aa]") {
  gpd::testing::FieldGenerator gen(7);
  for (int i = 0; i < 10; ++i) {
    const auto f = gen.next(0.05, 20.0);
    const double T = f.period();
    const double dt = std::min(T / 1e4, 0.02 / f.B);
    for (Level l : both_levels) {
      const auto traj = integrate_schrodinger(f, basis_pair(f, 0.0)[l], T, dt);
      CHECK(phase_distance(aharonov_anandan_phase(traj), geometric_phase(f, l, T)) < 1e-6);
    }
  }
}

TEST_CASE("Aharonov-Anandan phase is projectively invariant", "[oracle][aa][gauge]") {
  const auto f = FieldParams::make(1.0, 0.8, 0.6);
  const double T = f.period();
  const auto traj = integrate_schrodinger(f, Spinor{0.6, cplx(0.0, 0.8)}, T, T / 2e4);
  const double beta = aharonov_anandan_phase(traj);

  auto global = traj;
  for (auto& s : global.states) s = std::polar(1.0, 1.234) * s;
  CHECK(phase_distance(aharonov_anandan_phase(global), beta) < 1e-12);

  gpd::testing::FieldGenerator gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto alpha = gpd::testing::GaugeFunction::random(gen, T);
    auto gauged = traj;
    for (std::size_t i = 0; i < gauged.states.size(); ++i)
      gauged.states[i] = std::polar(1.0, alpha(gauged.times[i])) * gauged.states[i];
    CHECK(phase_distance(aharonov_anandan_phase(gauged), beta) < 1e-8);
  }
}

TEST_CASE("Aharonov-Anandan phase rejects orthogonal endpoints", "[oracle][aa]") {
  Trajectory traj;
  traj.times = {0.0, 0.5, 1.0};
  traj.states = {Spinor{1.0, 0.0}, Spinor{std::sqrt(0.5), std::sqrt(0.5)}, Spinor{0.0, 1.0}};
  CHECK_THROWS_AS(aharonov_anandan_phase(traj), std::domain_error);
}

TEST_CASE("direct sigma_z elements are time independent", "[oracle][matrix]") {
  const auto f = FieldParams::make(1.0, 2.1, -0.7);
  for (Level m : both_levels)
    for (Level l : both_levels) {
      const cplx ref = sigma_z_element_direct(f, m, l, 0.0);
      CHECK(std::abs(ref.imag()) < 1e-15);
      for (double t : {0.3, 5.0, 77.0})
        CHECK(std::abs(sigma_z_element_direct(f, m, l, t) - ref) < 1e-13);
    }
}

TEST_CASE("bath discretization", "[oracle][bath]") {
  const auto spec = ohmic(0.01, 3.0);
  for (int m : {200, 400, 1000}) {
    const auto bath = DiscretizedBath::uniform(spec, m);
    CHECK(bath.mode_count == m);
    CHECK(bath.frequencies.back() == Catch::Approx(3.0));
    const auto bins = bath.reconstruct_density(3.0, 5);
    for (const auto& b : bins)
      CHECK(std::abs(b.density / spectral_density(spec, b.center) - 1.0) < 0.05);
    // Sum g^2/omega -> (1/pi) Int J/omega = eta omega_c / pi.
    CHECK(bath.reorganization_energy() == Catch::Approx(0.01 * 3.0 / pi).epsilon(1e-12));
  }
  CHECK_THROWS_AS(DiscretizedBath::uniform(spec, 0), std::invalid_argument);
}

TEST_CASE("truncated bath without coupling", "[oracle][truncated]") {
  const auto f = FieldParams::make(1.0, pi / 3, 0.02);
  const auto spec = ohmic(0.0, 3.0);
  const auto bath = DiscretizedBath::uniform(spec, 50);
  const auto res = simulate_truncated_bath(f, spec, bath, 50.0, 0.02);
  CHECK(res.level == upper_level(f));
  for (const auto& z : res.amplitude) CHECK(std::abs(std::abs(z) - 1.0) < 1e-10);
  const auto fit = fit_exponential(res.amplitude, res.times);
  CHECK(std::abs(fit.rate) < 1e-10);
  CHECK(fit.frequency == Catch::Approx(effective_energies(f)[res.level]).epsilon(1e-9));
  CHECK(res.one_boson_population_max == 0.0);
  CHECK_FALSE(res.truncation_warning);
}

TEST_CASE("truncated bath reproduces the one-loop width and shift",
          "[oracle][truncated][slow]") {
  const auto f = FieldParams::make(1.0, pi / 3, 0.02);
  const auto spec = ohmic(0.01, 3.0);
  const Level up = upper_level(f);
  const double width = decay_width(f, spec, up);
  const double shift = energy_shift(f, spec, up);
  const double bare = effective_energies(f)[up];

  const auto run = [&](int modes) {
    const auto bath = DiscretizedBath::uniform(spec, modes);
    const auto res = simulate_truncated_bath(f, spec, bath, 300.0, 0.02);
    const auto fit = fit_exponential_window(res.amplitude, res.times, 5.0, 300.0);
    return std::tuple{fit, bath.reorganization_energy(), res};
  };

  const auto [fit400, reorg400, res400] = run(400);
  CHECK(std::abs(fit400.rate / (width / 2) - 1.0) < 0.10);
  const double measured_shift = fit400.frequency - bare + reorg400;
  CHECK(std::abs(measured_shift / shift - 1.0) < 0.15);
  CHECK(fit400.decaying);
  CHECK_FALSE(res400.truncation_warning);

  const auto [fit200, reorg200, res200] = run(200);
  CHECK(std::abs(fit200.rate / fit400.rate - 1.0) < 0.03);
}

TEST_CASE("truncated bath rejects non-Ohmic spectra", "[oracle][truncated]") {
  const auto f = FieldParams::make(1.0, 1.0, 0.1);
  const auto so = BathSpectrum::make(SpectrumKind::SuperOhmic, 0.01, 3.0);
  CHECK_THROWS_AS(simulate_truncated_bath(f, so, DiscretizedBath::uniform(so, 10), 1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("exponential fits", "[oracle][fit]") {
  std::vector<double> t;
  std::vector<cplx> z, flat;
  for (int i = 0; i < 200; ++i) {
    t.push_back(0.05 * i);
    z.push_back(std::exp(cplx(-0.1, -2.0) * t.back()));
    flat.push_back(cplx(0.3, 0.4));
  }
  const auto fit = fit_exponential(z, t);
  CHECK(std::abs(fit.rate - 0.1) < 1e-10);
  CHECK(std::abs(fit.frequency - 2.0) < 1e-10);
  CHECK(fit.decaying);
  CHECK(fit.monotone);
  CHECK(fit.samples == 200);

  const auto c = fit_exponential(flat, t);
  CHECK(std::abs(c.rate) < 1e-12);
  CHECK_FALSE(c.decaying);

  std::vector<cplx> growing;
  for (double x : t) growing.push_back(std::exp(cplx(0.05, 0.0) * x));
  const auto g = fit_exponential(growing, t);
  CHECK_FALSE(g.decaying);
  CHECK_FALSE(g.monotone);
  CHECK(g.rate == Catch::Approx(-0.05));

  CHECK_THROWS_AS(fit_exponential(std::span(z).first(9), std::span(t).first(9)),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_exponential(std::span(z).first(20), std::span(t).first(21)),
                  std::invalid_argument);
  auto with_zero = z;
  with_zero[5] = 0.0;
  CHECK_THROWS_AS(fit_exponential(with_zero, t), std::invalid_argument);

  const auto w = fit_exponential_window(z, t, 2.0, 6.0);
  CHECK(w.samples == 81);
  CHECK(std::abs(w.rate - 0.1) < 1e-10);
}

TEST_CASE("exponential fit tolerates multiplicative noise", "[oracle][fit][property]") {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> t;
    std::vector<cplx> z;
    for (int i = 0; i < 400; ++i) {
      t.push_back(0.05 * i);
      z.push_back((1.0 + noise(rng)) * std::exp(cplx(-0.1, -2.0) * t.back()));
    }
    const auto fit = fit_exponential(z, t);
    CHECK(std::abs(fit.rate / 0.1 - 1.0) < 0.02);
    CHECK(fit.magnitude_residual > 0.0);
  }
}
