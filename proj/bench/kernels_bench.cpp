// Serial vs OpenMP right-hand-side kernels over a range of grid sizes.
// Run: ./kernels_bench [--benchmark_filter=micro]

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <vector>

#include "msbc/pde/kernels.hpp"

namespace {

struct Fields {
  std::vector<double> a, b, C, src, out;
  explicit Fields(int n) : a(n + 1), b(n + 1), C(n + 1), src(n + 1), out(2 * (n - 1)) {
    for (int i = 0; i <= n; ++i) {
      const double x = 30.0 * i / n;
      a[i] = 0.2 * std::sin(x);
      b[i] = 0.1 * std::cos(x);
      C[i] = 0.5 * (a[i] + b[i]);
      src[i] = 0.01 * x;
    }
  }
};

template <msbc::Execution E>
void micro(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Fields f(n);
  const msbc::MicroCoefficients k;
  for (auto _ : state) {
    msbc::micro_rhs(E, k, 30.0 / n, n, f.a.data(), f.b.data(), f.out.data());
    benchmark::DoNotOptimize(f.out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * (n - 1));
  state.counters["threads"] = E == msbc::Execution::parallel ? omp_get_max_threads() : 1;
}

template <msbc::Execution E>
void macro(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Fields f(n);
  for (auto _ : state) {
    msbc::macro_rhs(E, 30.0 / n, n, f.C.data(), f.src.data(), f.out.data());
    benchmark::DoNotOptimize(f.out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * (n - 1));
  state.counters["threads"] = E == msbc::Execution::parallel ? omp_get_max_threads() : 1;
}

}  // namespace

BENCHMARK(micro<msbc::Execution::serial>)->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(micro<msbc::Execution::parallel>)->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(macro<msbc::Execution::serial>)->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(macro<msbc::Execution::parallel>)->RangeMultiplier(8)->Range(64, 1 << 18);

BENCHMARK_MAIN();
