#include <benchmark/benchmark.h>

#include "quadloop/monodromy.hpp"
#include "quadloop/sampling.hpp"

namespace {

using namespace quadloop;

void BM_RetractPoint(benchmark::State& state) {
  auto rng = seeded_rng(1, 1);
  std::vector<C3> pts;
  for (int i = 0; i < 1024; ++i) pts.push_back(random_ambient_point(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(retract_point(pts[i++ & 1023]));
  }
}
BENCHMARK(BM_RetractPoint);

void BM_PeriodK(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(period_K(res));
  }
}
BENCHMARK(BM_PeriodK)->Arg(64)->Arg(128)->Arg(256);

void BM_FEval(benchmark::State& state) {
  auto rng = seeded_rng(1, 2);
  const Loop x = random_mprime_loop(rng, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_eval(x).value);
  }
}
BENCHMARK(BM_FEval)->Arg(16)->Arg(32)->Arg(64);

void BM_LoopRetract(benchmark::State& state) {
  auto rng = seeded_rng(1, 3);
  const Loop x = random_mprime_loop(rng, 32, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loop_retract(x));
  }
}
BENCHMARK(BM_LoopRetract);

}  // namespace

BENCHMARK_MAIN();
