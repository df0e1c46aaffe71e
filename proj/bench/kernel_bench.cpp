#include <benchmark/benchmark.h>

#include <random>

#include "sumsetlab/kernels.hpp"

using namespace sumset;
using kernels::cplx;

namespace {

Bitset random_bits(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  Bitset b(n);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng)) b.set(i);
  return b;
}

std::vector<cplx> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cplx> v(n);
  for (auto& z : v) z = {u(rng), u(rng)};
  return v;
}

FiniteAbelianGroup group_for(std::int64_t n) { return FiniteAbelianGroup({static_cast<std::uint32_t>(n)}); }

}  // namespace

static void BM_dft_parallel(benchmark::State& st) {
  const auto g = group_for(st.range(0));
  const auto src = random_values(g.size(), 1);
  for (auto _ : st) {
    auto data = src;
    kernels::parallel::dft_axes(g, data, -1);
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(BM_dft_parallel)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_dft_serial(benchmark::State& st) {
  const auto g = group_for(st.range(0));
  const auto src = random_values(g.size(), 1);
  std::vector<cplx> out(g.size());
  for (auto _ : st) {
    kernels::serial::dft_naive(g, src, out, -1);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_dft_serial)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_group_sumset_parallel(benchmark::State& st) {
  const auto g = FiniteAbelianGroup({16, static_cast<std::uint32_t>(st.range(0))});
  const auto a = random_bits(g.size(), 0.05, 2), b = random_bits(g.size(), 0.05, 3);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::parallel::sumset(g, a, b));
}
BENCHMARK(BM_group_sumset_parallel)->Arg(16)->Arg(64);

static void BM_group_sumset_serial(benchmark::State& st) {
  const auto g = FiniteAbelianGroup({16, static_cast<std::uint32_t>(st.range(0))});
  const auto a = random_bits(g.size(), 0.05, 2), b = random_bits(g.size(), 0.05, 3);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::sumset(g, a, b));
}
BENCHMARK(BM_group_sumset_serial)->Arg(16)->Arg(64);

static void BM_integer_sumset_parallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_bits(n, 0.01, 4), b = random_bits(n, 0.01, 5);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::parallel::integer_sumset(a, b, 2 * n));
}
BENCHMARK(BM_integer_sumset_parallel)->Arg(1 << 12)->Arg(1 << 15);

static void BM_integer_sumset_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_bits(n, 0.01, 4), b = random_bits(n, 0.01, 5);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::integer_sumset(a, b, 2 * n));
}
BENCHMARK(BM_integer_sumset_serial)->Arg(1 << 12)->Arg(1 << 15);

static void BM_window_max_parallel(benchmark::State& st) {
  const auto bits = random_bits(1 << 18, 0.3, 6);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::parallel::sliding_window_max(bits, static_cast<std::size_t>(st.range(0))));
}
BENCHMARK(BM_window_max_parallel)->Arg(64)->Arg(1024);

static void BM_window_max_serial(benchmark::State& st) {
  const auto bits = random_bits(1 << 18, 0.3, 6);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::sliding_window_max(bits, static_cast<std::size_t>(st.range(0))));
}
BENCHMARK(BM_window_max_serial)->Arg(64)->Arg(1024);

static void BM_longest_run_parallel(benchmark::State& st) {
  const auto bits = random_bits(static_cast<std::size_t>(st.range(0)), 0.9, 7);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::parallel::longest_run(bits, 0, bits.size()));
}
BENCHMARK(BM_longest_run_parallel)->Arg(1 << 20)->Arg(1 << 24);

static void BM_longest_run_serial(benchmark::State& st) {
  const auto bits = random_bits(static_cast<std::size_t>(st.range(0)), 0.9, 7);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::longest_run(bits, 0, bits.size()));
}
BENCHMARK(BM_longest_run_serial)->Arg(1 << 20)->Arg(1 << 24);

static void BM_chunked_sum(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::parallel::chunked_sum(n, [](std::size_t i) { return std::polar(1.0, 0.001 * double(i)); }));
}
BENCHMARK(BM_chunked_sum)->Arg(1 << 20);

static void BM_plain_sum(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::serial::plain_sum(n, [](std::size_t i) { return std::polar(1.0, 0.001 * double(i)); }));
}
BENCHMARK(BM_plain_sum)->Arg(1 << 20);

BENCHMARK_MAIN();
