#include <benchmark/benchmark.h>

#include "tarel/rational.hpp"

using tarel::Rat;

static void BM_rational_add(benchmark::State& state) {
  Rat a(7, 13), b(-5, 11);
  for (auto _ : state) {
    Rat c = a + b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_rational_add);
