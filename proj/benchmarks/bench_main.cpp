#include <benchmark/benchmark.h>

#include "plasmon/config.hpp"
#include "plasmon/dynamics.hpp"
#include "plasmon/experiments.hpp"
#include "plasmon/linalg.hpp"

using namespace plasmon;

namespace {

const ResolvedSystem& fig2_system() {
  static const ResolvedSystem sys = resolve(load_scenario("fig2"));
  return sys;
}

const ResolvedSystem& fig4_system() {
  static const ResolvedSystem sys = resolve(load_scenario("fig4"));
  return sys;
}

void BM_SteadyState(benchmark::State& state) {
  const auto h = cavity_hamiltonian(fig2_system());
  const auto channels = standard_channels(h, ChannelSet::with_emitter);
  const DriveSpec drive{ModeLabel::emitter, 1.0, Energy{5.8e-5}};
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(h, channels, drive));
}
BENCHMARK(BM_SteadyState);

void BM_Expm(benchmark::State& state) {
  const auto h = cavity_hamiltonian(fig4_system());
  const Eigen::MatrixXcd a = std::complex<double>(0.0, -1000.0) * h.matrix();
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm);

void BM_EnhancementCell(benchmark::State& state) {
  const auto base = load_scenario("fig2");
  for (auto _ : state) benchmark::DoNotOptimize(enhancement_cell(base, 10.0, 4e4));
}
BENCHMARK(BM_EnhancementCell);

void BM_EigenSweep(benchmark::State& state) {
  const auto sweep = stepped_grid(-10e-3, 10e-3, 0.1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(eigen_sweep(fig4_system(), sweep));
}
BENCHMARK(BM_EigenSweep);

void BM_Calibration(benchmark::State& state) {
  const auto s = load_scenario("fig3");
  for (auto _ : state) benchmark::DoNotOptimize(resolve(s));
}
BENCHMARK(BM_Calibration);

}  // namespace

BENCHMARK_MAIN();
