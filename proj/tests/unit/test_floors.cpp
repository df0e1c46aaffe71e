#include <cmath>

#include <gmpxx.h>

#include "doctest.h"
#include "sumsetlab/error.hpp"
#include "sumsetlab/floors.hpp"

using namespace sumset;

namespace {

// floor(n^(p/q)) by bisection on m^q <= n^p, all in exact integers.
std::int64_t oracle_floor_pow(std::uint64_t n, long p, unsigned long q) {
  mpz_class target;
  mpz_ui_pow_ui(target.get_mpz_t(), n, static_cast<unsigned long>(p));
  std::int64_t lo = 0, hi = 1;
  auto le = [&](std::int64_t m) {
    mpz_class mq;
    mpz_pow_ui(mq.get_mpz_t(), mpz_class(static_cast<long>(m)).get_mpz_t(), q);
    return mq <= target;
  };
  while (le(hi)) hi *= 2;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (le(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("exact real literals") {
  CHECK(ExactReal::parse("2.5") == ExactReal{5, 2});
  CHECK(ExactReal::parse("5/2") == ExactReal{5, 2});
  CHECK(ExactReal::parse(" -0.125 ") == ExactReal{-1, 8});
  CHECK(ExactReal::parse("1.2").text() == "1.2");
  CHECK(ExactReal::parse("1/3").text() == "1/3");
  CHECK(ExactReal::parse("-0.05").text() == "-0.05");
  CHECK(ExactReal::parse("7").text() == "7");
  CHECK_THROWS_AS(ExactReal::parse("1.2.3"), DomainError);
  CHECK_THROWS_AS(ExactReal::parse("1/0"), DomainError);
  CHECK_THROWS_AS(ExactReal::parse("abc"), DomainError);
  CHECK_THROWS_AS(ExactReal::parse("123456789012345678901234"), DomainError);
}

TEST_CASE("floor_pow agrees with an exact integer oracle") {
  const auto c = ExactReal::parse("2.5");
  for (std::uint64_t n = 1; n <= 3000; ++n) CHECK(floor_pow(n, c) == oracle_floor_pow(n, 5, 2));
  for (std::uint64_t n = 999000; n <= 1000000; n += 7) CHECK(floor_pow(n, c) == oracle_floor_pow(n, 5, 2));
  // perfect squares make n^2.5 an integer: the exact path must not be off by one
  for (std::uint64_t k = 1; k <= 1000; ++k) CHECK(floor_pow(k * k, c) == oracle_floor_pow(k * k, 5, 2));
  const auto c2 = ExactReal::parse("1.5");
  for (std::uint64_t n = 1; n <= 5000; ++n) CHECK(floor_pow(n, c2) == oracle_floor_pow(n, 3, 2));
  const auto c3 = ExactReal::parse("0.7");
  for (std::uint64_t n = 1; n <= 2000; ++n) CHECK(floor_pow(n, c3) == oracle_floor_pow(n, 7, 10));
  CHECK(floor_pow(1, ExactReal::parse("3.25")) == 1);
  CHECK_THROWS_AS(floor_pow(10, ExactReal::parse("-1")), DomainError);
  CHECK_THROWS_AS(floor_pow(1000000, ExactReal::parse("4")), CapacityError);
}

TEST_CASE("floor_pow with a long exponent goes through MPFR") {
  const auto c = ExactReal::parse("1.41421356237");
  floor_stats() = {};
  for (std::uint64_t n = 2; n <= 200; ++n) {
    const auto v = floor_pow(n, c);
    const double approx = std::pow(static_cast<double>(n), 1.41421356237);
    CHECK(std::abs(static_cast<double>(v) - std::floor(approx)) <= 1.0);
  }
  // powers of 10 with exponent 1.41421356237 = 141421356237/10^11: n^c is irrational here
  CHECK(floor_pow(100, c) == static_cast<std::int64_t>(std::floor(std::pow(100.0, 1.41421356237))));
}

TEST_CASE("floor_exp_log_pow") {
  const auto c = ExactReal::parse("1.2");
  CHECK(floor_exp_log_pow(1, c) == 1);
  CHECK(floor_exp_log_pow(2, c) == 1);
  std::int64_t prev = 0;
  for (std::uint64_t n = 1; n <= 100000; ++n) {
    const auto v = floor_exp_log_pow(n, c);
    CHECK(v >= prev);
    prev = v;
    const double ref = std::floor(std::exp(std::pow(std::log(static_cast<double>(n)), 1.2)));
    if (n % 997 == 0) CHECK(std::abs(static_cast<double>(v) - ref) <= 1.0);
  }
  // exponent 1 gives floor(n) exactly, the hardest case for the error bound
  for (std::uint64_t n = 2; n <= 2000; ++n) CHECK(floor_exp_log_pow(n, ExactReal::integer(1)) == static_cast<std::int64_t>(n));
}

TEST_CASE("floor_poly") {
  std::vector<ExactReal> p{ExactReal::parse("0.5"), ExactReal::parse("1/3"), ExactReal::parse("2")};
  for (std::int64_t n = -50; n <= 50; ++n) {
    mpq_class v = mpq_class(1, 2) + mpq_class(n, 3) + 2 * n * n;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    CHECK(floor_poly(n, p) == fl.get_si());
  }
  CHECK_THROWS_AS(floor_poly(1, {}), DomainError);
  CHECK_THROWS_AS(floor_poly(1000000, {ExactReal::integer(0), ExactReal::integer(0), ExactReal::integer(0),
                                      ExactReal::integer(1000000)}),
                  CapacityError);
}
