#include <random>

#include "doctest.h"
#include "sumsetlab/kernels.hpp"

using namespace sumset;
using namespace sumset::kernels;

namespace {

Bitset random_bits(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Bitset b(n);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng)) b.set(i);
  return b;
}

}  // namespace

TEST_CASE("group sumset: parallel equals serial") {
  std::mt19937_64 rng(1);
  for (const char* lit : {"Z1", "Z12", "Z2xZ3xZ5", "Z64xZ3", "Z1000"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    for (int t = 0; t < 10; ++t) {
      auto a = random_bits(g.size(), 0.05, rng), b = random_bits(g.size(), 0.05, rng);
      CHECK(parallel::sumset(g, a, b) == serial::sumset(g, a, b));
    }
  }
}

TEST_CASE("integer sumset: parallel equals serial") {
  std::mt19937_64 rng(2);
  for (std::size_t n : {1, 63, 64, 65, 500, 3000}) {
    auto a = random_bits(n, 0.1, rng), b = random_bits(n, 0.1, rng);
    for (std::size_t out : {n, 2 * n - 1, n / 2 + 1}) CHECK(parallel::integer_sumset(a, b, out) == serial::integer_sumset(a, b, out));
  }
}

TEST_CASE("sliding window max: parallel equals serial") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1, 10, 100, 5000, 20000}) {
    auto bits = random_bits(n, 0.3, rng);
    for (std::size_t len : {std::size_t{1}, std::size_t{7}, n / 3 + 1, n}) {
      const auto p = parallel::sliding_window_max(bits, len), s = serial::sliding_window_max(bits, len);
      CHECK(p.count == s.count);
      CHECK(p.offset == s.offset);
      CHECK(bits.count_range(p.offset, p.offset + len) == p.count);
    }
  }
  CHECK(parallel::sliding_window_max(Bitset(5), 6).count == 0);
}

TEST_CASE("longest run: parallel equals serial across chunk seams") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {1, 64, 65, 1000, 300000, 600000}) {
    for (double p : {0.0, 0.5, 0.97, 1.0}) {
      auto bits = random_bits(n, p, rng);
      for (auto [lo, hi] : {std::pair<std::size_t, std::size_t>{0, n}, {n / 3, n}, {1, n / 2 + 1}}) {
        const auto a = parallel::longest_run(bits, lo, hi), b = serial::longest_run(bits, lo, hi);
        CHECK(a.length == b.length);
        CHECK(a.start == b.start);
      }
    }
  }
  // a run straddling the chunk boundary at 2^18
  Bitset big(700000);
  big.set_range(262000, 262300);
  big.set_range(500000, 500100);
  const auto r = parallel::longest_run(big, 0, big.size());
  CHECK(r.length == 300);
  CHECK(r.start == 262000);
}

TEST_CASE("chunked sum is thread-count independent and matches plain sum") {
  auto f = [](std::size_t i) { return cplx(1.0 / static_cast<double>(i + 1), std::sin(static_cast<double>(i))); };
  const std::size_t n = 100000;
  set_threads(1);
  const auto one = parallel::chunked_sum(n, f);
  set_threads(4);
  const auto four = parallel::chunked_sum(n, f);
  set_threads(0);
  CHECK(one == four);
  CHECK(std::abs(one - serial::plain_sum(n, f)) < 1e-9);
}

TEST_CASE("axes plan matches the parallel transform") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;
  for (const char* lit : {"Z12", "Z2xZ3xZ5", "Z7xZ7", "Z1"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    std::vector<cplx> x(g.size());
    for (auto& v : x) v = {d(rng), d(rng)};
    auto y = x;
    AxesPlan plan(g);
    plan.execute(x, -1);
    parallel::dft_axes(g, y, -1);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == y[i]);
  }
}
