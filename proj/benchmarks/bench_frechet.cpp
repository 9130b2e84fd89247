#include <benchmark/benchmark.h>

#include <random>

#include "lorentz/frechet.hpp"

using namespace lorentz;

namespace {

std::vector<Event> walk(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<Event> pts;
  Event x = Event::Zero(2);
  for (std::size_t i = 0; i < n; ++i) {
    x += make_vec({g(rng), g(rng)});
    pts.push_back(x);
  }
  return pts;
}

void BM_DiscreteFrechet(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = walk(rng, n), b = walk(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(discrete_frechet(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DiscreteFrechet)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNSquared);

void BM_FrechetCoupling(benchmark::State& state) {
  std::mt19937_64 rng(8);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = walk(rng, n), b = walk(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(discrete_frechet_coupling(a, b));
}
BENCHMARK(BM_FrechetCoupling)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace
