#include <benchmark/benchmark.h>

#include "fracdelay/dpml.hpp"
#include "fracdelay/solver.hpp"

namespace {

using fracdelay::SquareMatrix;

// Commuting pair with ||M||_1 + ||N||_1 < 1.
fracdelay::DpmlParams commuting_params(int dim) {
  fracdelay::DpmlParams p;
  p.alpha = 0.6;
  p.beta = 0.6;
  p.delay = 3;
  SquareMatrix base = SquareMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    base(i, i) = 0.5;
    if (i + 1 < dim) base(i, i + 1) = 0.2;
  }
  p.m = 0.4 * base;
  p.n = -0.3 * base * base;
  p.policy.tol = 1e-12;
  p.policy.i_max = 2000;
  return p;
}

void dpml_range(benchmark::State& state, fracdelay::WordForm form) {
  const auto params = commuting_params(static_cast<int>(state.range(0)));
  const int last = static_cast<int>(state.range(1));
  for (auto _ : state) {
    fracdelay::Dpml d(params, form);
    benchmark::DoNotOptimize(d.range(-params.delay, last));
  }
}

void BM_DpmlRecursive(benchmark::State& state) { dpml_range(state, fracdelay::WordForm::recursive); }
void BM_DpmlBinomial(benchmark::State& state) { dpml_range(state, fracdelay::WordForm::binomial); }

BENCHMARK(BM_DpmlRecursive)->Args({2, 20})->Args({2, 60})->Args({4, 60})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DpmlBinomial)->Args({2, 20})->Args({2, 60})->Args({4, 60})->Unit(benchmark::kMillisecond);

fracdelay::DelaySystem system(int dim, int horizon) {
  const auto p = commuting_params(dim);
  fracdelay::DelaySystem sys;
  sys.alpha = p.alpha;
  sys.delay = p.delay;
  sys.m = p.m;
  sys.n = p.n;
  sys.horizon = horizon;
  sys.policy = p.policy;
  sys.phi = fracdelay::GridSeries::tabulate(1 - sys.delay, 0, dim, [&](int k) {
    return fracdelay::Vector(fracdelay::Vector::Constant(dim, 1.0 + 0.1 * k));
  });
  sys.forcing = fracdelay::Forcing::constant(fracdelay::Vector::Constant(dim, 0.25));
  return sys;
}

void BM_StepSolve(benchmark::State& state) {
  const auto sys = system(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(fracdelay::step_solve(sys));
}

void BM_ClosedFormSolve(benchmark::State& state) {
  const auto sys = system(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(fracdelay::closed_form_solve(sys));
}

BENCHMARK(BM_StepSolve)->Args({2, 20})->Args({2, 60})->Args({4, 60})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosedFormSolve)->Args({2, 20})->Args({2, 60})->Args({4, 60})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
