#include <benchmark/benchmark.h>

#include <numbers>

#include "lorentz/conjugate.hpp"
#include "lorentz/factory.hpp"
#include "lorentz/geodesic.hpp"

using namespace lorentz;

namespace {

SpaceHandle ellipsoid() {
  SpaceDescriptor d;
  d.space = "product";
  d.fiber = "ellipsoid";
  d.axes = {1.0, 1.0, 0.6};
  return make_space(d);
}

void BM_IntegrateEllipsoid(benchmark::State& state) {
  auto h = ellipsoid();
  const Event p = make_vec({0, std::numbers::pi / 2, 0});
  const Tangent v = make_vec({4, 0.1, 0.6 * std::numbers::pi});
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_geodesic(*h.spacetime, p, v, 1.0, nodes));
}
BENCHMARK(BM_IntegrateEllipsoid)->Arg(3)->Arg(65)->Arg(257);

void BM_ExponentialJacobian(benchmark::State& state) {
  auto h = ellipsoid();
  const Event p = make_vec({0, 1.2, 0.3});
  const Tangent v = make_vec({2, 0.3, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(exponential(*h.spacetime, p, v, true));
}
BENCHMARK(BM_ExponentialJacobian);

void BM_ShootingBvp(benchmark::State& state) {
  auto h = make_model_space(-1.0, 2);
  ShootingOptions opts;
  opts.use_exact_flow = state.range(0) != 0;
  const Event p = make_vec({0, 0.2}), q = make_vec({1.8, -0.1});
  for (auto _ : state) benchmark::DoNotOptimize(solve_bvp(*h.spacetime, p, q, opts));
}
BENCHMARK(BM_ShootingBvp)->Arg(0)->Arg(1);

void BM_JacobiScanAds(benchmark::State& state) {
  auto h = make_model_space(-1.0, 2);
  const auto sol = trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0}), 1.5 * std::numbers::pi, 65);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_scan(*h.spacetime, sol));
}
BENCHMARK(BM_JacobiScanAds);

}  // namespace
