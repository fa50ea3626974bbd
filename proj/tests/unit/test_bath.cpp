#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gpd/bath.hpp"
#include "gpd/oracle.hpp"
#include "test_support.hpp"

using namespace gpd;

namespace {

BathSpectrum ohmic(double eta, double omega_c) {
  return BathSpectrum::make(SpectrumKind::Ohmic, eta, omega_c);
}

}  // namespace

TEST_CASE("spectral densities", "[bath][spectrum]") {
  const auto o = ohmic(0.3, 3.0);
  CHECK(spectral_density(o, 0.0) == 0.0);
  CHECK(spectral_density(o, 2.0) == Catch::Approx(0.6).epsilon(1e-15));
  CHECK(spectral_density(o, 3.5) == 0.0);
  const auto s = BathSpectrum::make(SpectrumKind::SuperOhmic, 0.3, 3.0);
  CHECK(spectral_density(s, 2.0) == Catch::Approx(2.4).epsilon(1e-15));
  CHECK(spectral_density(s, 3.0) == Catch::Approx(8.1).epsilon(1e-15));
  CHECK(spectral_density(s, 3.0 + 1e-12) == 0.0);
  CHECK_THROWS_AS(spectral_density(o, -1e-3), std::invalid_argument);
}

TEST_CASE("bath spectrum validation and advisories", "[bath][spectrum]") {
  CHECK_THROWS_AS(ohmic(-0.1, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(ohmic(0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ohmic(INFINITY, 3.0), std::invalid_argument);
  CHECK(ohmic(0.1, 3.0).warnings().empty());
  CHECK_FALSE(ohmic(0.6, 3.0).warnings().empty());
  const auto f = FieldParams::make(1.0, 1.0, 0.1);
  CHECK_FALSE(ohmic(0.1, 0.5).warnings(&f).empty());
  CHECK(ohmic(0.1, 3.0).warnings(&f).empty());
}

TEST_CASE("self-energy basics", "[bath][self_energy]") {
  const auto f = FieldParams::make(1.0, pi / 3, 0.1);
  for (Level k : both_levels) CHECK(self_energy_diag(f, ohmic(0.0, 3.0), k) == cplx(0.0, 0.0));
  const Level ground = lower_level(f);
  CHECK(self_energy_diag(f, ohmic(0.2, 3.0), ground).imag() == 0.0);
  CHECK(self_energy_diag(f, ohmic(0.2, 3.0), upper_level(f)).imag() > 0.0);
  CHECK_THROWS_AS(self_energy_diag(f, BathSpectrum::make(SpectrumKind::SuperOhmic, 0.1, 3.0),
                                   Level::Plus),
                  std::invalid_argument);
}

TEST_CASE("self-energy matches the direct matrix-algebra evaluation",
          "[bath][self_energy][oracle]") {
  const auto f = FieldParams::make(1.0, pi / 2, 0.01);
  const auto spec = ohmic(0.1, 3.0);
  for (Level m : both_levels)
    for (Level k : both_levels)
      CHECK(std::abs(self_energy(f, spec, m, k) - oracle::self_energy_direct(f, spec, m, k)) <
            1e-14);

  gpd::testing::FieldGenerator gen(17);
  for (int i = 0; i < 200; ++i) {
    const auto g = gen.next(1e-3, 1e2);
    const auto s = ohmic(gen.uniform(0.0, 0.3), level_gap(g) * gen.uniform(1.2, 4.0));
    for (Level k : both_levels) {
      const cplx a = self_energy_diag(g, s, k);
      const cplx b = oracle::self_energy_direct(g, s, k, k);
      CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(b)));
    }
  }
}

TEST_CASE("cutoff resonance is a typed error", "[bath][self_energy]") {
  const auto f = FieldParams::make(1.0, 1.0, 0.3);
  const double gap = level_gap(f);
  const auto spec = ohmic(0.1, gap);
  CHECK_THROWS_AS(self_energy_diag(f, spec, Level::Minus), CutoffResonanceError);
  // The lower level's transition is -gap, far from the cutoff.
  CHECK_NOTHROW(total_energy(f, spec, Level::Plus));
  try {
    (void)energy_shift(f, spec, Level::Minus);
    FAIL("expected CutoffResonanceError");
  } catch (const CutoffResonanceError& e) {
    CHECK(e.level() == Level::Minus);
    CHECK(e.transition() == Catch::Approx(gap));
  }
  CHECK_NOTHROW(self_energy_diag(f, ohmic(0.1, gap * (1 + 1e-6)), Level::Minus));
}

TEST_CASE("decay widths", "[bath][width]") {
  const auto f = FieldParams::make(1.0, pi / 3, 0.05);
  const auto spec = ohmic(0.3, 3.0);
  CHECK(decay_width(f, spec, lower_level(f)) == 0.0);
  CHECK(decay_width(f, spec, Level::Plus) == 0.0);

  // The closed-form width, evaluated independently of the level sums.
  const double t0 = std::atan2(0.05 * std::sin(pi / 3), 1.0 + 0.05 * std::cos(pi / 3));
  const double vt = pi / 3 - t0;
  const double expected =
      2 * 0.3 * std::sin(vt) * std::sin(vt) * (std::cos(t0) + 0.05 * std::cos(vt));
  CHECK(std::abs(decay_width(f, spec, Level::Minus) - expected) < 1e-14);
  CHECK(std::abs(oracle::decay_width_direct(f, spec, Level::Minus) - expected) < 1e-14);

  // theta = theta0 only at theta = 0 for finite omega0.
  const auto aligned = FieldParams::make(1.0, 0.0, 0.4);
  CHECK(decay_width(aligned, spec, Level::Minus) == 0.0);
}

TEST_CASE("generic width equals the closed form on a 50x50 grid", "[bath][width][property]") {
  const auto spec = ohmic(0.2, 1e6);
  for (int i = 0; i < 50; ++i) {
    const double th = pi * i / 49;
    for (int j = 0; j < 50; ++j) {
      const double w = std::pow(10.0, -3.0 + 5.0 * j / 49);
      const auto f = FieldParams::make(1.0, th, w);
      const double t0 = theta0(f);
      const double s = std::sin(th - t0);
      const double closed =
          2 * spec.eta * s * s * (f.B * std::cos(t0) + w * std::cos(th - t0));
      CHECK(std::abs(decay_width(f, spec, Level::Minus) - closed) < 1e-12);
      CHECK(decay_width(f, spec, Level::Minus) >= 0.0);
    }
  }
}

TEST_CASE("shift and width are exactly linear in eta", "[bath][linearity][property]") {
  gpd::testing::FieldGenerator gen(31);
  for (int i = 0; i < 300; ++i) {
    const auto f = gen.next(1e-3, 1e2);
    const double eta = gen.uniform(1e-4, 0.25);
    const double wc = level_gap(f) * gen.uniform(1.1, 5.0);
    for (Level k : both_levels) {
      const auto one = total_energy(f, ohmic(eta, wc), k);
      const auto two = total_energy(f, ohmic(2 * eta, wc), k);
      CHECK(two.energy_shift == 2 * one.energy_shift);
      CHECK(two.width == 2 * one.width);
    }
  }
}

TEST_CASE("total energy", "[bath][total_energy]") {
  const auto f = FieldParams::make(1.0, 0.9, 0.2);
  const auto e = effective_energies(f);
  for (Level k : both_levels) {
    const auto lvl = total_energy(f, ohmic(0.0, 3.0), k);
    CHECK(lvl.total_energy() == e[k]);
    CHECK(lvl.energy_shift == 0.0);
  }

  // Degenerate levels: the l = k term and the (zero-gap) l != k term both drop out even
  // though their logarithms are singular.
  const auto degenerate = FieldParams::make(1.0, pi, 1.0);
  CHECK(level_gap(degenerate) < 1e-7);
  for (Level k : both_levels) {
    const auto lvl = total_energy(degenerate, ohmic(0.1, 3.0), k);
    CHECK(std::isfinite(lvl.energy_shift));
    CHECK(lvl.width < 1e-15);
  }
}

TEST_CASE("total energy reduces to the adiabatic closed form", "[bath][total_energy]") {
  const auto spec = ohmic(0.1, 3.0);
  for (double th : {0.3, pi / 4, 1.2, 2.0, 2.8}) {
    for (double w : {1e-2, 1e-3}) {
      const auto f = FieldParams::make(1.0, th, w);
      const double s2 = std::sin(th) * std::sin(th);
      const double c = std::cos(th);
      for (Level k : both_levels) {
        const double sg = level_sign(k);
        const double closed = -sg * 0.5 - 0.5 * w * (1 + sg * c) +
                              sg * spec.eta / pi * s2 * (1 - w * c) *
                                  std::log(std::abs(1 + sg * spec.omega_c / (1 + w * c)));
        CHECK(std::abs(total_energy(f, spec, k).total_energy() - closed) < 10 * w * w);
      }
    }
  }
}

TEST_CASE("upper-level shift sign follows the logarithm", "[bath][total_energy][property]") {
  gpd::testing::FieldGenerator gen(41);
  for (int i = 0; i < 200; ++i) {
    const auto f = gen.next(1e-4, 5e-2, false);
    if (f.theta < 1e-3 || f.theta > pi - 1e-3) continue;
    const auto spec = ohmic(0.1, gen.uniform(2.3, 10.0));
    const Level up = upper_level(f);
    const auto e = effective_energies(f);
    const double dE = e[other(up)] - e[up];
    const double log_term = std::log(std::abs(spec.omega_c / (e[up] - e[other(up)]) - 1.0));
    CHECK(log_term > 0.0);
    const double shift = energy_shift(f, spec, up);
    CHECK((shift > 0) == (dE * log_term > 0));
    // Upper level sits near +B/2 and is pulled down: |E^tot| < |E|.
    CHECK(std::abs(e[up] + shift) < std::abs(e[up]));
  }
}

TEST_CASE("dissipative amplitude", "[bath][amplitude]") {
  const auto f = FieldParams::make(1.0, pi / 3, 0.1);
  for (Level l : both_levels)
    for (double t : {0.0, 0.7, 13.0})
      CHECK(dissipative_amplitude(f, ohmic(0.0, 3.0), l, t) == exact_amplitude(f, l, t));

  const auto spec = ohmic(0.05, 3.0);
  const Level low = lower_level(f);
  for (double t : {0.0, 1.0, 100.0, 1e4})
    CHECK(std::abs(norm(dissipative_amplitude(f, spec, low, t)) - 1.0) < 1e-12);

  const Level up = upper_level(f);
  const double gamma = decay_width(f, spec, up);
  CHECK(gamma > 0.0);
  const double tau = 2.0 / gamma;
  CHECK(std::abs(norm(dissipative_amplitude(f, spec, up, tau)) - std::exp(-1.0)) < 1e-12);

  double prev = 2.0;
  for (int i = 0; i <= 200; ++i) {
    const double n = norm(dissipative_amplitude(f, spec, up, i * 0.05 * tau));
    CHECK(n < prev);
    prev = n;
  }

  // Started at t0 it carries the basis vector of t0 with unit norm.
  const auto psi = dissipative_amplitude(f, spec, up, 3.0, 3.0);
  CHECK(max_component_diff(psi, basis_pair(f, 3.0)[up]) < 1e-15);
}

TEST_CASE("upper-level probability bookkeeping", "[bath][amplitude][property]") {
  const auto f = FieldParams::make(1.0, 1.1, 0.05);
  const auto spec = ohmic(0.05, 3.0);
  const Level up = upper_level(f);
  const double gamma = decay_width(f, spec, up);
  const auto level = total_energy(f, spec, up);
  // Composite Simpson for Int_0^t |psi(s)|^2 ds on a grid fine enough for 1e-6.
  for (double t : {0.5 / gamma, 2.0 / gamma, 7.0 / gamma}) {
    const int n = 2000;
    const double h = t / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * norm_sq(dissipative_amplitude(f, level, i * h));
    }
    const double integral = acc * h / 3.0;
    const double persistent = norm_sq(dissipative_amplitude(f, level, t));
    CHECK(std::abs(persistent + gamma * integral - 1.0) < 1e-6);
  }
}
