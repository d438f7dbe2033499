// Serial reference vs OpenMP kernels. Run with QWALK_THREADS unset to use
// every core, e.g. ./build/bench_kernels --benchmark_min_time=0.2

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qwalk/kernels.hpp"

namespace {

using qwalk::kernels::cplx;

std::vector<cplx> filled(std::size_t size) {
  std::vector<cplx> v(size);
  for (std::size_t k = 0; k < size; ++k) {
    v[k] = {std::sin(0.37 * static_cast<double>(k)), std::cos(0.11 * static_cast<double>(k))};
  }
  return v;
}

const cplx kA{0.6, 0.0};
const cplx kB{0.0, 0.8};

template <bool Parallel>
void BM_WalkStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto in = filled(2 * n);
  std::vector<cplx> out(2 * n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(qwalk::kernels::walk_step(in, out, kA, kB));
    } else {
      benchmark::DoNotOptimize(qwalk::kernels::walk_step_serial(in, out, kA, kB));
    }
    std::swap(in, out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Parallel>
void BM_GroverStep(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  auto in = filled(static_cast<std::size_t>(side) * side * 4);
  std::vector<cplx> out(in.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(qwalk::kernels::grover_step(in, out, side, side, true));
    } else {
      benchmark::DoNotOptimize(qwalk::kernels::grover_step_serial(in, out, side, side, true));
    }
    std::swap(in, out);
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

template <bool Parallel>
void BM_Matmul(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto a = filled(dim * dim);
  const auto b = filled(dim * dim);
  std::vector<cplx> c(dim * dim);
  for (auto _ : state) {
    if constexpr (Parallel) {
      qwalk::kernels::matmul(a, b, c, dim);
    } else {
      qwalk::kernels::matmul_serial(a, b, c, dim);
    }
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(dim * dim * dim));
}

}  // namespace

BENCHMARK(BM_WalkStep<false>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_WalkStep<true>)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_GroverStep<false>)->Arg(51)->Arg(200)->Arg(600);
BENCHMARK(BM_GroverStep<true>)->Arg(51)->Arg(200)->Arg(600);
BENCHMARK(BM_Matmul<false>)->Arg(128)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Matmul<true>)->Arg(128)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
