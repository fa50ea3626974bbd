#include <benchmark/benchmark.h>

#include <cmath>

#include "gpd/density.hpp"
#include "gpd/oracle.hpp"
#include "gpd/phase_analysis.hpp"

using namespace gpd;

namespace {

const FieldParams field = FieldParams::make(1.0, pi / 3, 0.05);
const BathSpectrum ohmic = BathSpectrum::make(SpectrumKind::Ohmic, 0.3, 3.0);

void BM_GeometricPhaseQuadrature(benchmark::State& state) {
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(geometric_phase_quadrature(field, Level::Plus, field.period(), nodes));
  state.SetItemsProcessed(state.iterations() * nodes);
}
BENCHMARK(BM_GeometricPhaseQuadrature)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_IntegrateSchrodinger(benchmark::State& state) {
  const double T = field.period();
  const double dt = T / static_cast<double>(state.range(0));
  const Spinor psi0 = basis_pair(field, 0.0)[Level::Plus];
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::integrate_schrodinger(field, psi0, T, dt, 1 << 30));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateSchrodinger)->Arg(10'000)->Arg(100'000);

void BM_AharonovAnandan(benchmark::State& state) {
  const double T = field.period();
  const auto traj = oracle::integrate_schrodinger(field, basis_pair(field, 0.0)[Level::Minus], T,
                                                  T / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::aharonov_anandan_phase(traj));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AharonovAnandan)->Arg(100'000);

void BM_TotalEnergy(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(total_energy(field, ohmic, Level::Plus));
    benchmark::DoNotOptimize(total_energy(field, ohmic, Level::Minus));
  }
}
BENCHMARK(BM_TotalEnergy);

void BM_AdiabaticPhases(benchmark::State& state) {
  const auto slow = FieldParams::make(1.0, pi / 3, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(adiabatic_phases(slow, ohmic));
}
BENCHMARK(BM_AdiabaticPhases);

void BM_ReducedDensity(benchmark::State& state) {
  const SuperposedState st{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduced_density(st, field, ohmic, t));
    t += 0.01;
  }
}
BENCHMARK(BM_ReducedDensity);

void BM_TruncatedBath(benchmark::State& state) {
  const auto weak = BathSpectrum::make(SpectrumKind::Ohmic, 0.01, 3.0);
  const auto bath = oracle::DiscretizedBath::uniform(weak, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::simulate_truncated_bath(field, weak, bath, 50.0, 0.02));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TruncatedBath)->RangeMultiplier(2)->Range(50, 400)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
