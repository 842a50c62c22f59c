#include <random>

#include <benchmark/benchmark.h>

#include "sepwave/fixtures.hpp"
#include "sepwave/matrix_core.hpp"
#include "sepwave/solver.hpp"
#include "sepwave/sturm_liouville.hpp"

using namespace sepwave;

namespace {

CMatrix singular_matrix(Index n) {
  std::mt19937 rng(1);
  std::normal_distribution<double> d;
  CMatrix x(n, n - 1);
  CMatrix y(n - 1, n);
  for (Index i = 0; i < x.size(); ++i) {
    x.data()[i] = Complex(d(rng), d(rng));
    y.data()[i] = Complex(d(rng), d(rng));
  }
  return x * y;
}

void BM_Drazin(benchmark::State& state) {
  const CMatrix m = singular_matrix(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(matrix_core::drazin_inverse(m));
  }
}
BENCHMARK(BM_Drazin)->Arg(3)->Arg(8)->Arg(32);

void BM_SolvePsd(benchmark::State& state) {
  const auto prob = sturm_liouville::SLProblem::canonical(static_cast<int>(state.range(0)), -0.5, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sturm_liouville::solve_psd(prob));
  }
}
BENCHMARK(BM_SolvePsd)->Arg(8)->Arg(64)->Arg(512);

void BM_Pipeline(benchmark::State& state) {
  fixtures::ExampleParams params;
  params.N = static_cast<int>(state.range(0));
  params.k = 1.0 / (4 * params.N);
  const ProblemSpec spec = fixtures::singular_example(params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver::run_pipeline(spec));
  }
}
BENCHMARK(BM_Pipeline)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
