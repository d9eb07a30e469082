// Serial reference loop against the OpenMP kernel on the same prepared tables.

#include <benchmark/benchmark.h>

#include "ellhomog/counter.hpp"

using namespace ellhomog;

namespace {

const CountingTables& tables_for(int which) {
  static const CountingTables sp4 =
      prepare_counting(make_space(SpaceKind::Symplectic, 4, 3), ShapeSeq({2}, 0), {4});
  static const CountingTables gl3 = prepare_counting(make_space(SpaceKind::TypeA, 3, 3), Coxeter{}, {3});
  return which == 0 ? sp4 : gl3;
}

void BM_Serial(benchmark::State& state) {
  const auto& t = tables_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_serial(t));
}

void BM_Parallel(benchmark::State& state) {
  const auto& t = tables_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_parallel(t, static_cast<int>(state.range(1))));
}

}  // namespace

// range(0): 0 = Sp4(3) shape (2), 1 = GL3(3) Coxeter
BENCHMARK(BM_Serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->ArgsProduct({{0, 1}, {1, 2, 4, 0}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
