#include <benchmark/benchmark.h>

#include "billiards/displacement.hpp"
#include "billiards/rigidity.hpp"

using namespace billiards;

namespace {

const Table& tri6() {
  static const Table t = build_table(three_disc_config(6.0));
  return t;
}

void BM_BilliardMap(benchmark::State& state) {
  const PeriodicOrbit o = solve_periodic_orbit(tri6(), Word{1, 2, 3});
  // iterating would drift off the orbit and escape, so map the same point
  for (auto _ : state) benchmark::DoNotOptimize(billiard_map(tri6(), o.points[0]).image);
}
BENCHMARK(BM_BilliardMap);

void BM_SolveOrbit(benchmark::State& state) {
  // 123123... with the last symbol fixed up to keep the cycle admissible
  std::vector<int> s;
  for (int k = 0; k < state.range(0); ++k) s.push_back(1 + k % 3);
  if (s.back() == s.front()) s.back() = 2;
  const Word w(s);
  for (auto _ : state) benchmark::DoNotOptimize(solve_periodic_orbit(tri6(), w).length);
}
BENCHMARK(BM_SolveOrbit)->Arg(3)->Arg(8)->Arg(16);

void BM_LengthSpectrum(benchmark::State& state) {
  MlsOptions opt;
  opt.workers = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(marked_length_spectrum(tri6(), static_cast<int>(state.range(0)), opt).size());
}
BENCHMARK(BM_LengthSpectrum)->Args({8, 1})->Args({8, 4})->Unit(benchmark::kMillisecond);

void BM_TemporalDisplacement(benchmark::State& state) {
  const Quadrilateral q = periodic_quadrilateral(tri6(), Word{1, 2}, Word{1, 3});
  for (auto _ : state) benchmark::DoNotOptimize(temporal_displacement(tri6(), q, static_cast<int>(state.range(0))).H);
}
BENCHMARK(BM_TemporalDisplacement)->Arg(30)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_BowenRoot(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(bowen_root(tri6(), static_cast<int>(state.range(0)), Stability::Unstable));
}
BENCHMARK(BM_BowenRoot)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_TraceCover(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(trace_cover(tri6(), static_cast<int>(state.range(0))).measure());
}
BENCHMARK(BM_TraceCover)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
