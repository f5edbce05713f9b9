#include <cmath>

#include <benchmark/benchmark.h>

#include "parityscope/detection.hpp"
#include "parityscope/estimator.hpp"
#include "parityscope/fig2.hpp"
#include "parityscope/quasiprob.hpp"
#include "parityscope/states.hpp"

using namespace parityscope;

namespace {

const DetectorModel kLab(0.70, 0.986, 0.985);

void BM_DisplacementMatrix(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(displacement_matrix({1.2, -0.7}, dim));
  state.SetComplexityN(dim);
}
BENCHMARK(BM_DisplacementMatrix)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_LossChannel(benchmark::State& state) {
  const TruncationPolicy pol{static_cast<int>(state.range(0)), 1e-9};
  const DensityMatrix rho = phase_diffused_coherent(1.39, {}, pol);
  for (auto _ : state) benchmark::DoNotOptimize(loss_channel(rho, 0.6902));
}
BENCHMARK(BM_LossChannel)->Arg(48)->Arg(96);

void BM_DisplacedPopulations(benchmark::State& state) {
  const DensityMatrix rho = phase_diffused_coherent(1.39, {}, TruncationPolicy{});
  for (auto _ : state) benchmark::DoNotOptimize(displaced_populations(rho, {0.8, 0.5}));
}
BENCHMARK(BM_DisplacedPopulations);

void BM_FullCountDistribution(benchmark::State& state) {
  const MeasurementChain chain(coherent(std::sqrt(1.34 / 0.6902), TruncationPolicy{}), kLab);
  const ProbePoint pt{{1.1, 0.2}};
  for (auto _ : state) benchmark::DoNotOptimize(chain.full(pt));
}
BENCHMARK(BM_FullCountDistribution);

void BM_ExactPi(benchmark::State& state) {
  const MeasurementChain chain(phase_diffused_coherent(1.39, {}, TruncationPolicy{}), kLab);
  const ProbePoint pt{{1.1, 0.2}};
  for (auto _ : state) benchmark::DoNotOptimize(chain.exact_pi(pt));
}
BENCHMARK(BM_ExactPi);

void BM_SampleCounts(benchmark::State& state) {
  const CountDistribution p = poisson_distribution(1.3, 48);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_counts(p, state.range(0), ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleCounts)->Arg(8000);

void BM_ScanPanel(benchmark::State& state) {
  const RunConfig c = fig2_panel_config(Fig2Panel::Coherent, Fig2Options{});
  const MeasurementChain chain(build_state(c.state, c.truncation), c.detector.model());
  const ScanGrid grid = c.grid.grid();
  ScanOptions o = c.scan_options();
  o.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan(chain, grid, o));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(grid.size()));
}
BENCHMARK(BM_ScanPanel)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
