#include <benchmark/benchmark.h>

#include <cmath>

#include "homog/axisym.hpp"
#include "homog/families.hpp"
#include "homog/homo2d.hpp"
#include "homog/residuals.hpp"
#include "homog/sphere.hpp"

using namespace homog;

namespace {

ScalarField sample(const GridPtr& g) {
  ScalarField s(g, 0.0);
  for (int j = 0; j < g->nlat(); ++j) {
    for (int k = 0; k < g->nlon(); ++k) {
      s(j, k) = std::cos(g->phi(j)) * std::sin(g->phi(j)) * std::cos(2 * g->theta(k)) +
                std::pow(std::sin(g->phi(j)), 3) * std::sin(3 * g->theta(k));
    }
  }
  return s;
}

void BM_sh_round_trip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = SphereGrid::build(n, 2 * n);
  const auto s = sample(g);
  for (auto _ : state) {
    auto c = sh_analysis(s);
    benchmark::DoNotOptimize(sh_synthesis(c, g));
  }
}
BENCHMARK(BM_sh_round_trip)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_poisson_solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = SphereGrid::build(n, 2 * n);
  const auto s = sample(g);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_solve(s));
}
BENCHMARK(BM_poisson_solve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_check_system(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = SphereGrid::build(n, 2 * n);
  const auto sol = conical_axisym(-10, 0.6, 0.8, g);
  for (auto _ : state) benchmark::DoNotOptimize(check_system(sol, 1e-8));
}
BENCHMARK(BM_check_system)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_shoot_endpoint(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(shoot_endpoint(-1.5, 0.0));
}
BENCHMARK(BM_shoot_endpoint)->Unit(benchmark::kMillisecond);

void BM_time_span(benchmark::State& state) {
  const double B = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(time_span(-2.0, B));
}
BENCHMARK(BM_time_span)->DenseRange(-2, 6, 4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
