#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "crossbound/analysis.hpp"
#include "crossbound/eigensolver.hpp"
#include "crossbound/grid.hpp"
#include "crossbound/operator.hpp"

using namespace crossbound;

namespace {

void BM_AssembleQuarter(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto p = CrossProblem::make(1.0, SymmetryClass::even_even(), 20.0, 20.0);
  const Grid g = build_grid(p, N, N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_operator(g, p));
  }
  state.SetLabel(std::to_string(assemble_operator(g, p).dim()) + " unknowns");
}
BENCHMARK(BM_AssembleQuarter)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_GroundState(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto p = CrossProblem::make(1.0, SymmetryClass::even_even(), 20.0, 20.0);
  const auto op = assemble_operator(build_grid(p, N, N), p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smallest_eigenpairs(op, 1, {}));
  }
}
BENCHMARK(BM_GroundState)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_SolvePipeline(benchmark::State& state) {
  SolveRequest req;
  req.beta = 1.5;
  req.sym = SymmetryClass::even_even();
  req.grid = {20.0, 600, "I"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_cross(req));
  }
}
BENCHMARK(BM_SolvePipeline)->Unit(benchmark::kMillisecond);

void BM_PoleFit(benchmark::State& state) {
  std::vector<SweepRecord> records;
  for (double beta = 1.0; beta <= 1.116; beta += 0.004) {
    SweepRecord r;
    r.beta = beta;
    r.klass = "oo";
    r.bound = true;
    r.ell_x = 0.0108614 / (1.0 - 0.992232 * std::pow(beta, 0.0673327));
    records.push_back(r);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        locate_critical_beta(SymmetryClass::odd_odd(), records, CriticalMethod::PoleFit));
  }
}
BENCHMARK(BM_PoleFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
