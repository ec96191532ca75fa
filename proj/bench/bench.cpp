// Serial reference paths against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "sigmaflow/flow.hpp"
#include "sigmaflow/hodge.hpp"
#include "sigmaflow/models.hpp"
#include "sigmaflow/probes.hpp"
#include "sigmaflow/soliton.hpp"

using namespace sigmaflow;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_SolitonProbes(benchmark::State& state) {
  const SolitonSpec spec = SolitonSpec::from_model(sphere(4));
  const auto probes = probe_points(spec.chart.domain(), 64);
  SolitonOptions opts;
  opts.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(residual_points(spec, probes, opts));
}

void BM_FlowRhs(benchmark::State& state) {
  ParseOptions o;
  o.aliases.emplace("theta", 0);
  const FlowState s = FlowState::from_expr(5, 3, 1, 1024, parse("0.05*cos(theta)", o));
  for (auto _ : state) benchmark::DoNotOptimize(flow_rhs(s, mode(state)));
}

void BM_FftGrid(benchmark::State& state) {
  const int n = 3, size = 64;
  std::vector<std::complex<double>> data(size * size * size);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = {static_cast<double>(i % 7), 0.0};
  for (auto _ : state) {
    auto copy = data;
    fft_grid(copy, n, size, false, mode(state));
    benchmark::DoNotOptimize(copy.data());
  }
}

}  // namespace

BENCHMARK(BM_SolitonProbes)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlowRhs)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FftGrid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
