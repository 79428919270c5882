#include <benchmark/benchmark.h>

#include <omp.h>

#include <cmath>

#include "cconv/reference.hpp"
#include "cconv/subdifferential.hpp"
#include "cconv/transform.hpp"

using namespace cconv;

namespace {

struct Problem {
  GridFunction f;
  CostMatrix cost;
};

Problem make_problem(std::size_t n) {
  const Grid g = make_uniform_grid(-1.0, 1.0, n);
  return {sample_function([](double x) { return x * x + 0.1 * std::sin(7.0 * x); }, g),
          tabulate_cost(CostSpec::neg_quadratic(), g, g)};
}

void BM_reference_c_transform(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::c_transform(p.f, p.cost));
}

void BM_parallel_c_transform(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(c_transform(p.f, p.cost));
  omp_set_num_threads(saved);
}

void BM_fenchel_fast(benchmark::State& state) {
  const Grid g = make_uniform_grid(-1.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const GridFunction f = sample_function([](double x) { return 0.5 * x * x; }, g);
  for (auto _ : state) benchmark::DoNotOptimize(fenchel_conjugate_fast(f, g));
}

void BM_support_slacks(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(support_slacks(p.f, p.cost));
  omp_set_num_threads(saved);
}

}  // namespace

BENCHMARK(BM_reference_c_transform)->Arg(257)->Arg(1025)->Arg(4097)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parallel_c_transform)
    ->ArgsProduct({{257, 1025, 4097}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fenchel_fast)->Arg(257)->Arg(4097)->Arg(65537)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_support_slacks)->ArgsProduct({{513, 2049}, {1, 4}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
