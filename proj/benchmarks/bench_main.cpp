#include <benchmark/benchmark.h>

#include "goupillaud/characteristics.hpp"
#include "goupillaud/transport.hpp"

using namespace goupillaud;

namespace {

const SubordinatorSpec kPoisson = SubordinatorSpec::compound_poisson(1.0, 1.0, 1.0);
const SubordinatorSpec kGamma = SubordinatorSpec::gamma(1.0, 1.0, 1.0);
const TimeWindow kWindow{-3.0, 5.0};

void BM_SamplePoisson(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_compound_poisson(kPoisson, kWindow, seed++));
}
BENCHMARK(BM_SamplePoisson);

void BM_SampleGammaGrid(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const IndexWindow knots = knot_window(kWindow, level);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_gamma_grid(kGamma, level, knots, seed++));
  state.SetItemsProcessed(state.iterations() * knots.increment_count());
}
BENCHMARK(BM_SampleGammaGrid)->Arg(10)->Arg(14);

void BM_Coarsen(benchmark::State& state) {
  const GridPath fine = sample_gamma_grid(kGamma, 14, knot_window(kWindow, 14), 1);
  for (auto _ : state) benchmark::DoNotOptimize(coarsen(fine, 2));
}
BENCHMARK(BM_Coarsen);

void BM_SolveDiscrete(benchmark::State& state) {
  const JumpPath path = sample_compound_poisson(kPoisson, kWindow, 1);
  const auto xi = PiecewiseLinearPath::from_path(path, static_cast<int>(state.range(0)));
  const auto grid = EvalGrid::midpoint({0.0, 4.0, 0.0, 2.0}, 512, 257);
  const auto u0 = InitialData::triangular();
  for (auto _ : state) benchmark::DoNotOptimize(solve_discrete(xi, u0, grid));
  state.SetItemsProcessed(state.iterations() * 512 * 257);
}
BENCHMARK(BM_SolveDiscrete)->Arg(4)->Arg(12);

void BM_SolveLimit(benchmark::State& state) {
  const JumpPath path = sample_compound_poisson(kPoisson, kWindow, 1);
  const auto grid = EvalGrid::midpoint({0.0, 4.0, 0.0, 2.0}, 512, 257);
  const auto u0 = InitialData::triangular();
  for (auto _ : state) benchmark::DoNotOptimize(solve_limit(path, u0, grid));
  state.SetItemsProcessed(state.iterations() * 512 * 257);
}
BENCHMARK(BM_SolveLimit);

void BM_FioEvaluate(benchmark::State& state) {
  const auto u0 = InitialData::triangular();
  const auto steps = static_cast<std::size_t>(state.range(0));
  double g = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fio_evaluate(g, u0, 200.0, steps));
    g += 1e-3;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FioEvaluate)->Arg(1024)->Arg(16384);

}  // namespace

BENCHMARK_MAIN();
