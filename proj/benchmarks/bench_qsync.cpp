#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsync/graph.hpp"
#include "qsync/propagation.hpp"
#include "qsync/quantizer.hpp"
#include "qsync/simulator.hpp"

namespace {

using namespace qsync;

const double kOmega = std::sqrt(std::numbers::pi / 2.0);

DirectedGraph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) edges.push_back({i, j, 1.0 / static_cast<double>(n)});
    }
  }
  return DirectedGraph(n, std::move(edges));
}

void BM_AssembleFlow(benchmark::State& state) {
  const Mat L = build_laplacian(complete_graph(static_cast<std::size_t>(state.range(0)))).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_flow(kOmega, 0.1, L));
}
BENCHMARK(BM_AssembleFlow)->Arg(10)->Arg(50)->Arg(100);

void BM_SpectralDecomposition(benchmark::State& state) {
  const Laplacian L = build_laplacian(complete_graph(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_decomposition(L));
}
BENCHMARK(BM_SpectralDecomposition)->Arg(10)->Arg(50);

void BM_EpsFrame(benchmark::State& state) {
  const Laplacian L = build_laplacian(standin_graph());
  const SystemMatrices sys = build_system(kOmega, 0.1, L, spectral_decomposition(L));
  for (auto _ : state) benchmark::DoNotOptimize(build_eps_frame(sys));
}
BENCHMARK(BM_EpsFrame);

void BM_Simulate(benchmark::State& state) {
  const Model model = build_model(standin_graph(), {kOmega, 0.1, 0.5, 10.0});
  const Vec X0 = seeded_initial_state(model, 1.0, 0.9, 0.0, 1);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(model, {ZoomMode::Adjustable, 1.0, steps, 0}, X0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(10000);

void BM_Quantize(benchmark::State& state) {
  const UniformQuantizer q(0.5, 10.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  Vec y(1024);
  for (auto& x : y) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(q.quantize(0.7, y));
  state.SetItemsProcessed(state.iterations() * y.size());
}
BENCHMARK(BM_Quantize);

}  // namespace

BENCHMARK_MAIN();
