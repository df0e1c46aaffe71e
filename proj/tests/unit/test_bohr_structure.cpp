#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "sumsetlab/bohr_structure.hpp"
#include "sumsetlab/error.hpp"

using namespace sumset;

namespace {

// ||p x / q|| by integer residues.
double rational_norm(std::int64_t p, std::int64_t q, std::int64_t x) {
  std::int64_t r = (p * x) % q;
  if (r < 0) r += q;
  return static_cast<double>(std::min(r, q - r)) / static_cast<double>(q);
}

BohrSpec spec1(const std::string& theta, double eps, std::int64_t center = 0) {
  return BohrSpec{{Frequency::parse(theta)}, eps, center};
}

}  // namespace

TEST_CASE("Bohr spec literals") {
  const auto s = BohrSpec::parse("bohr(d=1; theta=0.618; eps=0.1; center=0)");
  CHECK(s.rank() == 1);
  CHECK(s.eps == 0.1);
  CHECK(BohrSpec::parse(s.text()).text() == s.text());
  const auto two = BohrSpec::parse("bohr(d=2; theta=1/3, 0.25; eps=0.05; center=-4)");
  CHECK(two.rank() == 2);
  CHECK(two.center == -4);
  CHECK(two.text() == "bohr(d=2; theta=1/3,0.25; eps=0.05; center=-4)");
  CHECK(BohrSpec::parse("bohr(d=0)").rank() == 0);
  CHECK_THROWS_AS(BohrSpec::parse("bohr(d=2; theta=0.1; eps=0.1)"), DomainError);
  CHECK_THROWS_AS(BohrSpec::parse("bohr(d=1; theta=0.1; eps=0.6)"), DomainError);
  CHECK_THROWS_AS(BohrSpec::parse("bohr(d=1; theta=0.1; eps=0)"), DomainError);
  CHECK_THROWS_AS(BohrSpec::parse("bohr(d=1; theta=0.1)"), DomainError);
  CHECK_THROWS_AS(BohrSpec::parse("ball(eps=0.1)"), DomainError);
}

TEST_CASE("membership") {
  const auto s = spec1("1/4", 0.2);
  CHECK(bohr_membership(s, 0).member);
  CHECK(bohr_membership(s, 0).margin == 0.2);
  CHECK(bohr_membership(s, 4).member);
  CHECK_FALSE(bohr_membership(s, 1).member);
  CHECK(bohr_membership(s, 1).norm == 0.25);
  const auto c = spec1("0.3819660112501051", 0.01, 17);
  CHECK(bohr_membership(c, 17).member);
  CHECK(bohr_membership(c, 17).margin == 0.01);

  for (std::int64_t q : {5, 7, 12}) {
    for (std::int64_t p = 1; p < q; ++p) {
      const auto sp = BohrSpec{{Frequency::rational(p, q)}, 0.3, 0};
      for (std::int64_t x = -60; x <= 60; ++x) CHECK(bohr_membership(sp, x).norm == doctest::Approx(rational_norm(p, q, x)).epsilon(1e-15));
    }
  }
  // Bohr_0 sets are symmetric
  const auto g = BohrSpec::parse("bohr(d=2; theta=0.7071067811865476, 0.1234; eps=0.1; center=0)");
  for (std::int64_t x = 1; x < 3000; ++x) CHECK(bohr_membership(g, x).member == bohr_membership(g, -x).member);
}

TEST_CASE("half-radius sums stay in the full-radius set") {
  for (const auto& theta : {"0.6180339887498949", "2/7", "0.001"}) {
    for (double eps : {0.05, 0.1, 0.25}) {
      const auto half = bohr_window(spec1(theta, eps / 2), -400, 400).elements();
      const auto full = spec1(theta, eps);
      for (auto a : half)
        for (auto b : half) REQUIRE(bohr_membership(full, a + b).member);
    }
  }
}

TEST_CASE("windows and densities") {
  const auto w = bohr_window(spec1("1/3", 0.1), -30, 3000);
  for (std::int64_t x = -30; x <= 3000; ++x) CHECK(w.contains(x) == (x % 3 == 0));

  const double golden = 0.6180339887498949;
  const auto gr = bohr_density_bound_check(BohrSpec{{Frequency::real(golden)}, 0.1, 0}, {0, 999999});
  CHECK(gr.density == doctest::Approx(0.2).epsilon(0.005));
  CHECK(gr.bound == doctest::Approx(1.0 / 11));
  CHECK_FALSE(gr.violation);
  CHECK(gr.window_large_enough);

  const auto d2 = bohr_density_bound_check(BohrSpec{{Frequency::real(std::numbers::sqrt2 - 1), Frequency::real(std::numbers::sqrt3 - 1)}, 0.25, 0},
                                           {0, 999999});
  CHECK(d2.density == doctest::Approx(0.25).epsilon(0.01));
  CHECK(d2.bound == doctest::Approx(1.0 / 25));

  const auto wide = bohr_density_bound_check(BohrSpec{{Frequency::real(golden)}, 0.5, 0}, {0, 99999});
  CHECK(wide.density > 0.9999);

  // rational theta with q < 1/eps: only multiples of q qualify, density >= 1/q
  for (std::int64_t q = 2; q < 10; ++q) {
    const auto r = bohr_density_bound_check(BohrSpec{{Frequency::rational(1, q)}, 0.1, 0}, {0, 9999});
    CHECK(r.density >= 1.0 / static_cast<double>(q) - 1e-4);
    CHECK_FALSE(r.violation);
  }
  CHECK(bohr_density_bound(0.25, 2) == doctest::Approx(1.0 / 25));
  CHECK_FALSE(bohr_density_bound_check(spec1("0.3", 0.05), {0, 100}).window_large_enough);
}

TEST_CASE("gaps of rational Bohr sets are bounded by the period") {
  for (std::int64_t q = 2; q <= 13; ++q)
    for (double eps : {0.05, 0.2, 0.5}) {
      const auto w = bohr_window(BohrSpec{{Frequency::rational(1, q)}, eps, 3}, 0, 5000);
      CHECK(classify_syndetic(w, static_cast<std::uint64_t>(q)).syndetic_at_scale);
    }
  // irrational: the gap is stable under window doubling
  const auto s = spec1("0.6180339887498949", 0.05);
  const auto g1 = classify_syndetic(bohr_window(s, 0, 50000), 1000).max_gap;
  const auto g2 = classify_syndetic(bohr_window(s, 0, 100000), 1000).max_gap;
  CHECK(g1 == g2);
}

TEST_CASE("embeddability of Bohr sets") {
  const auto s = spec1("0.6180339887498949", 0.1);
  const auto self = bohr_embeddability(s, {0, 60}, bohr_window(s, 0, 60), 2);
  CHECK(self.search.embeds);
  CHECK(self.success_rate == 1);
  for (const auto& w : self.search.witnesses) CHECK(w.translate == 0);

  // A + B with A = B = Bohr(theta, eps/2) contains Bohr(theta, eps)'s probes
  const auto half = bohr_window(spec1("0.6180339887498949", 0.05), -2000, 2000);
  std::vector<std::int64_t> sums;
  const auto he = half.elements();
  std::set<std::int64_t> ss;
  for (auto a : he)
    for (auto b : he) ss.insert(a + b);
  sums.assign(ss.begin(), ss.end());
  const auto target = WindowSet::from_elements(-4000, 4000, sums);
  const auto rep = bohr_embeddability(s, {-200, 200}, target, 2);
  CHECK(rep.success_rate == 1);

  const auto squares = WindowSet::from_rule(SetRule::parse("squares"), 0, 20000);
  const auto sq = bohr_embeddability(spec1("0.7071067811865476", 0.1), {0, 150}, squares, 3);
  CHECK(sq.search.failures > 0);
  CHECK(sq.success_rate < 1);
  CHECK(sq.search.probes > sq.search.failures);
  REQUIRE(sq.search.failing_probe);
  // replay a failure: no translate of the probe lands in the squares window
  const auto& f = *sq.search.failing_probe;
  for (std::int64_t t = -f.front(); t + f.back() <= 20000; ++t) {
    bool ok = true;
    for (auto x : f) ok = ok && squares.contains(x + t);
    REQUIRE_FALSE(ok);
  }
}

TEST_CASE("piecewise Bohr scan") {
  const auto even = WindowSet::from_rule(SetRule::parse("even"), 0, 3000);
  PiecewiseBohrOptions opt;
  opt.run_length = 500;
  const auto c = piecewise_bohr_scan(even, opt);
  REQUIRE(!c.empty());
  CHECK(c.front().spec.rank() == 1);
  CHECK(c.front().spec.thetas[0] == Frequency::rational(1, 2));
  CHECK(c.front().containment == 1);
  CHECK(c.front().spec.eps == 0.25);  // largest radius with full containment

  const auto all = WindowSet::from_rule(SetRule::parse("all"), -100, 100);
  opt.run_length = 50;
  const auto z = piecewise_bohr_scan(all, opt);
  CHECK(z.front().spec.rank() == 0);
  CHECK(z.front().containment == 1);

  // seeds are the largest coefficients of the target
  const auto mod3 = WindowSet::from_rule(SetRule::parse("mod(3, 1)"), 0, 2999);
  const auto seeds = seed_frequencies(mod3, 12, 2);
  REQUIRE(seeds.size() == 2);
  CHECK(seeds[0].theta == Frequency::rational(1, 3));
  CHECK(seeds[1].theta == Frequency::rational(2, 3));
  CHECK(seeds[0].magnitude == doctest::Approx(1.0 / 3));

  PiecewiseBohrOptions centered;
  centered.center_count = 3;
  centered.run_length = 300;
  const auto m = piecewise_bohr_scan(mod3, centered);
  CHECK(m.front().containment == 1);
  CHECK(m.front().spec.center == 1);
  // deterministic order
  const auto again = piecewise_bohr_scan(mod3, centered);
  REQUIRE(again.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(again[i].spec.text() == m[i].spec.text());

  PiecewiseBohrOptions bad;
  bad.eps_grid.clear();
  CHECK_THROWS_AS(piecewise_bohr_scan(even, bad), DomainError);
  PiecewiseBohrOptions none;
  none.seed_count = 0;
  CHECK_THROWS_AS(piecewise_bohr_scan(even, none), DomainError);
}
