#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "monoflow/evolution.hpp"
#include "monoflow/fem.hpp"
#include "monoflow/kernels.hpp"
#include "monoflow/scenarios.hpp"

namespace {

using namespace monoflow;

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.001 * static_cast<double>(i));
  return v;
}

template <class Assemble>
void assemble_bench(benchmark::State& state, Assemble assemble) {
  const Grid g = build_grid(0.0, 1.0, static_cast<int>(state.range(0)));
  const CoefficientSpec coeff{Coefficient::affine(1.0, 0.5), Coefficient::constant(1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(assemble(g, coeff));
}

void BM_AssembleSerial(benchmark::State& s) { assemble_bench(s, kernels::serial::assemble); }
void BM_AssembleOmp(benchmark::State& s) { assemble_bench(s, kernels::omp::assemble); }

template <class Residual>
void residual_bench(benchmark::State& state, Residual residual) {
  const Grid g = build_grid(0.0, 1.0, static_cast<int>(state.range(0)));
  const auto a = kernels::serial::assemble(g, {});
  const auto u = ramp(g.interior_count());
  const auto f = ramp(g.node_count());
  std::vector<double> out(g.interior_count());
  for (auto _ : state) {
    residual(a.stiffness, a.mass_full, a.lumped, u, f, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_ResidualSerial(benchmark::State& s) { residual_bench(s, kernels::serial::residual_representative); }
void BM_ResidualOmp(benchmark::State& s) { residual_bench(s, kernels::omp::residual_representative); }

template <class Dot>
void dot_bench(benchmark::State& state, Dot dot) {
  const auto x = ramp(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dot(x, x));
}

void BM_DotSerial(benchmark::State& s) { dot_bench(s, kernels::serial::dot); }
void BM_DotOmp(benchmark::State& s) { dot_bench(s, kernels::omp::dot); }

void BM_ConstrainedRun(benchmark::State& state) {
  const auto s = make_scenario("hat", static_cast<int>(state.range(0)));
  const auto op = assemble(s.grid, s.coefficients);
  const auto tg = make_time_grid(1.0, 64);
  for (auto _ : state) benchmark::DoNotOptimize(run(op, s.forcing, s.u0, tg, SchemeConfig{}));
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_AssembleOmp)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_ResidualSerial)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_ResidualOmp)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_DotSerial)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_DotOmp)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_ConstrainedRun)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
