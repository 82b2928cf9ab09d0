#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include <fracvar/fracgrid.hpp>
#include <fracvar/reference.hpp>
#include <fracvar/solver.hpp>
#include <fracvar/special.hpp>

namespace fv = fracvar;

static void BM_MittagLeffler(benchmark::State& state) {
  const fv::MLParams params{0.5, 1.5};
  double z = -0.1 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fv::mittag_leffler(params, z));
}
BENCHMARK(BM_MittagLeffler)->Arg(1)->Arg(30);

static void BM_MittagLefflerTabulated(benchmark::State& state) {
  const fv::MittagLefflerSeries ml({0.5, 1.5});
  for (auto _ : state) benchmark::DoNotOptimize(ml(-1.0));
}
BENCHMARK(BM_MittagLefflerTabulated);

static void BM_AssembleOperator(benchmark::State& state) {
  const fv::Grid g(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_frac_operator(g, fv::FracOrder(0.5), fv::Side::Left));
  }
}
BENCHMARK(BM_AssembleOperator)->Arg(251)->Arg(1001)->Arg(2001)->Unit(benchmark::kMicrosecond);

static void BM_ApplyOperator(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const fv::Grid g(0.0, 1.0, n);
  const auto op = assemble_frac_operator(g, fv::FracOrder(0.5), fv::Side::Left);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(g.node(i));
  const fv::SampledFunction f(g, std::move(v));
  for (auto _ : state) benchmark::DoNotOptimize(apply(op, f));
}
BENCHMARK(BM_ApplyOperator)->Arg(251)->Arg(1001)->Arg(2001)->Unit(benchmark::kMicrosecond);

static void BM_ReferenceExtremal(benchmark::State& state) {
  const fv::Grid g(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fv::ml_convolution_extremal({1.0, fv::FracOrder(0.5), 1.0, g}));
  }
}
BENCHMARK(BM_ReferenceExtremal)->Arg(251)->Arg(1001)->Unit(benchmark::kMillisecond);

static void BM_SolveIsoperimetric(benchmark::State& state) {
  const fv::Grid g(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const double yb = fv::boundary_value({1.0, fv::FracOrder(0.5), 1.0, g});
  const fv::Problem p(fv::Lagrangian::parse("v^2"), 1.0, fv::FracOrder(0.5), g, 0.0, yb,
                      fv::Constraint{fv::Lagrangian::parse("v"), 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(fv::solve_isoperimetric(p));
}
BENCHMARK(BM_SolveIsoperimetric)->Arg(251)->Arg(1001)->Unit(benchmark::kMillisecond);

static void BM_SolveNonQuadratic(benchmark::State& state) {
  const fv::Grid g(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const fv::Problem p(fv::Lagrangian::parse("sqrt(1 + v^2)"), 0.5, fv::FracOrder(0.4), g, 0.1, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(fv::solve_unconstrained(p));
}
BENCHMARK(BM_SolveNonQuadratic)->Arg(201)->Arg(501)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
