#include "bubblecorr/profile.hpp"
#include "bubblecorr/quadrature.hpp"
#include "bubblecorr/reduction.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace bc;

namespace {

double bump(const std::vector<double>& y) {
  double s = 0.0;
  for (double c : y) s += c * c;
  return std::exp(-s) * (1.0 + y[0]);
}

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_SphereIntegral(benchmark::State& state) {
  const std::vector<double> center(5, 0.1);
  sphere_rule(5, 32);
  for (auto _ : state) benchmark::DoNotOptimize(sphere_integral(bump, center, 1.0, 32, mode(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_BallIntegral(benchmark::State& state) {
  sphere_rule(4, 24);
  for (auto _ : state) benchmark::DoNotOptimize(ball_integral(bump, 4, 2.0, 48, 24, mode(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_LinearizedResidual(benchmark::State& state) {
  MultiIndex a(6, 0), b(6, 0);
  a[0] = 4;
  b[1] = 4;
  const Polynomial p = Polynomial::monomial(a) - Polynomial::monomial(b);
  const Polynomial g = solve_gamma(p).gamma;
  for (auto _ : state) benchmark::DoNotOptimize(linearized_residual(g, p, 2000, 1, 3.0, mode(state)).max_abs);
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_SphereIntegral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallIntegral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearizedResidual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
