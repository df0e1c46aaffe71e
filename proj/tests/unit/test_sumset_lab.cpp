#include <random>

#include "doctest.h"
#include "sumsetlab/error.hpp"
#include "sumsetlab/sumset_lab.hpp"

using namespace sumset;

namespace {

GroupSubset set_of(const FiniteAbelianGroup& g, std::initializer_list<std::size_t> xs) {
  std::vector<std::size_t> v(xs);
  return GroupSubset::from_indices(g, v);
}

GroupSubset random_set(const FiniteAbelianGroup& g, std::mt19937_64& rng, double p = 0.4) {
  std::bernoulli_distribution coin(p);
  Bitset b(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    if (coin(rng)) b.set(i);
  return GroupSubset(g, std::move(b));
}

GroupSubset mask_set(const FiniteAbelianGroup& g, std::uint64_t m) {
  Bitset b(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    if ((m >> i) & 1) b.set(i);
  return GroupSubset(g, std::move(b));
}

// Sumset by coordinate tuples, sharing nothing with the library's index arithmetic.
Bitset oracle_sumset(const FiniteAbelianGroup& g, const Bitset& a, const Bitset& b) {
  Bitset out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (!a.test(x)) continue;
    const auto ex = g.element(x);
    for (std::size_t y = 0; y < g.size(); ++y) {
      if (!b.test(y)) continue;
      const auto ey = g.element(y);
      GroupElement s{ex.coords};
      for (std::size_t k = 0; k < g.rank(); ++k) s.coords[k] = (ex.coords[k] + ey.coords[k]) % g.orders()[k];
      out.set(g.index_of(s));
    }
  }
  return out;
}

std::size_t oracle_stabilizer_order(const FiniteAbelianGroup& g, const Bitset& s) {
  std::size_t count = 0;
  for (std::size_t h = 0; h < g.size(); ++h) {
    bool ok = true;
    for (std::size_t x = 0; x < g.size() && ok; ++x)
      if (s.test(x)) ok = s.test(g.index_of(g.add(g.element(x), g.element(h))));
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("subset literals") {
  auto z6 = FiniteAbelianGroup::parse("Z6");
  auto a = GroupSubset::parse(z6, "{0, 2,4}");
  CHECK(a.cardinality() == 3);
  CHECK(a.literal() == "{0,2,4}");
  CHECK(GroupSubset::parse(z6, "0x15") == a);
  CHECK(GroupSubset::parse(z6, "{-2}") == set_of(z6, {4}));
  CHECK(GroupSubset::parse(z6, "{}").empty());
  auto g = FiniteAbelianGroup::parse("Z2xZ3");
  auto b = GroupSubset::parse(g, "{(1,2),(0,0)}");
  CHECK(b.literal() == "{(0,0),(1,2)}");
  CHECK(GroupSubset::parse(g, b.literal()) == b);
  CHECK(std::abs(b.density() - 1.0 / 3.0) < 1e-15);
  CHECK_THROWS_AS(GroupSubset::parse(z6, "0x40"), DomainError);
  CHECK_THROWS_AS(GroupSubset::parse(z6, "{1,,2}"), DomainError);
  CHECK_THROWS_AS(GroupSubset::parse(z6, "1,2"), DomainError);
  CHECK_THROWS_AS(GroupSubset::parse(g, "{7}"), DomainError);
  CHECK_THROWS_AS(GroupSubset::parse(g, "{(1,2,3)}"), StructuralError);
}

TEST_CASE("sumset examples") {
  auto z8 = FiniteAbelianGroup::parse("Z8");
  CHECK(sumset::sumset(set_of(z8, {0, 1}), set_of(z8, {0, 2})) == set_of(z8, {0, 1, 2, 3}));
  auto z6 = FiniteAbelianGroup::parse("Z6");
  CHECK(sumset::sumset(set_of(z6, {0, 2, 4}), set_of(z6, {0, 2, 4})) == set_of(z6, {0, 2, 4}));
  std::mt19937_64 rng(1);
  auto a = random_set(z8, rng);
  CHECK(sumset::sumset(a, set_of(z8, {0})) == a);
  CHECK(sumset::sumset(a, GroupSubset(z8)).empty());
  CHECK_THROWS_AS(sumset::sumset(a, GroupSubset(z6)), StructuralError);
}

TEST_CASE("sumset matches the coordinate oracle and is monotone") {
  std::mt19937_64 rng(2);
  for (const char* lit : {"Z12", "Z2xZ3xZ5", "Z4xZ4", "Z97"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    for (int t = 0; t < 40; ++t) {
      auto a = random_set(g, rng, 0.2), b = random_set(g, rng, 0.2);
      const auto s = sumset::sumset(a, b);
      CHECK(s.members() == oracle_sumset(g, a.members(), b.members()));
      auto a2 = GroupSubset(g, a.members() | random_set(g, rng, 0.1).members());
      auto b2 = GroupSubset(g, b.members() | random_set(g, rng, 0.1).members());
      CHECK(s.members().is_subset_of(sumset::sumset(a2, b2).members()));
    }
  }
}

TEST_CASE("steinhaus level set") {
  auto z4 = FiniteAbelianGroup::parse("Z4");
  CHECK(steinhaus_level_set(set_of(z4, {0}), set_of(z4, {0})) == set_of(z4, {0}));

  auto z6 = FiniteAbelianGroup::parse("Z6");
  for (std::uint64_t ma = 1; ma < 64; ++ma)
    for (std::uint64_t mb = 1; mb < 64; ++mb) {
      auto a = mask_set(z6, ma), b = mask_set(z6, mb);
      const auto level = steinhaus_level_set(a, b);
      CHECK(!level.empty());
      CHECK(level.members() == oracle_sumset(z6, a.members(), b.members()));
    }
}

TEST_CASE("steinhaus exhaustive scan for every group of order <= 10") {
  for (std::uint32_t n = 1; n <= 10; ++n)
    for (const auto& g : abelian_groups_of_order(n)) {
      const auto r = steinhaus_exhaustive(g);
      CHECK(r.pairs == ((std::uint64_t{1} << n) - 1) * ((std::uint64_t{1} << n) - 1));
      CHECK_MESSAGE(r.mismatches == 0, g.literal());
    }
  CHECK_THROWS_AS(steinhaus_exhaustive(FiniteAbelianGroup::parse("Z17")), CapacityError);
}

TEST_CASE("steinhaus random pairs up to |G| = 64") {
  std::uint64_t seed = 3;
  for (const char* lit : {"Z17", "Z2xZ3xZ5", "Z64", "Z8xZ8", "Z2xZ2xZ2xZ2xZ3"}) {
    const auto r = steinhaus_random(FiniteAbelianGroup::parse(lit), 300, seed++);
    CHECK(r.pairs == 300);
    CHECK_MESSAGE(r.mismatches == 0, lit);
  }
}

TEST_CASE("pigeonhole examples") {
  auto z5 = FiniteAbelianGroup::parse("Z5");
  auto r = pigeonhole_fill_check(set_of(z5, {0, 1, 2}), set_of(z5, {0, 1, 2}));
  CHECK(r.forced);
  CHECK(r.full);
  CHECK_FALSE(r.violation);
  auto z4 = FiniteAbelianGroup::parse("Z4");
  r = pigeonhole_fill_check(set_of(z4, {0, 1}), set_of(z4, {0, 1}));
  CHECK_FALSE(r.forced);
  CHECK_FALSE(r.full);
  r = pigeonhole_fill_check(GroupSubset::full(z4), set_of(z4, {0}));
  CHECK(r.full);
}

TEST_CASE("pigeonhole exhaustive scans") {
  for (std::uint32_t n = 1; n <= 18; ++n)
    for (const auto& g : abelian_groups_of_order(n)) {
      const auto r = pigeonhole_exhaustive(g);
      CHECK(r.forced_pairs > 0);
      CHECK_MESSAGE(r.violations == 0, g.literal());
    }
  // Unreduced count on Z5: pairs with |A| + |B| > 5 among nonempty subsets.
  const auto full = pigeonhole_exhaustive(FiniteAbelianGroup::parse("Z5"), {false, 1});
  CHECK(full.pairs == 31 * 31);
  std::uint64_t forced = 0;
  for (std::uint64_t a = 1; a < 32; ++a)
    for (std::uint64_t b = 1; b < 32; ++b) forced += std::popcount(a) + std::popcount(b) > 5;
  CHECK(full.forced_pairs == forced);
  CHECK(full.violations == 0);
}

TEST_CASE("kneser certificate examples") {
  auto z6 = FiniteAbelianGroup::parse("Z6");
  auto c = kneser_certificate(set_of(z6, {0, 2, 4}), set_of(z6, {0, 2, 4}));
  CHECK(std::vector<std::size_t>(c.stabilizer.elements().begin(), c.stabilizer.elements().end()) ==
        std::vector<std::size_t>{0, 2, 4});
  CHECK(c.sum_size == 3);
  CHECK(c.small_sumset);
  CHECK(c.valid());

  // Cosets of H add to a single coset.
  auto g = FiniteAbelianGroup::parse("Z2xZ6");
  for (const auto& h : enumerate_subgroups(g)) {
    auto a = GroupSubset::from_indices(g, h.coset(5));
    auto b = GroupSubset::from_indices(g, h.coset(7));
    auto cert = kneser_certificate(a, b);
    CHECK(cert.sum_size == h.order());
    CHECK(h.members().is_subset_of(cert.stabilizer.members()));
  }

  // |A + B| < |A| + |B| does not by itself force a nontrivial stabilizer.
  auto z4 = FiniteAbelianGroup::parse("Z4");
  auto t = kneser_certificate(set_of(z4, {0, 1}), set_of(z4, {0, 1}));
  CHECK(t.small_sumset);
  CHECK(t.stabilizer.is_trivial());
  CHECK(t.valid());

  CHECK_THROWS_AS(kneser_certificate(GroupSubset(z4), set_of(z4, {0})), DomainError);
}

TEST_CASE("kneser certificate agrees with brute force and Cauchy-Davenport on Z7") {
  auto z7 = FiniteAbelianGroup::parse("Z7");
  for (std::uint64_t ma = 1; ma < 128; ++ma)
    for (std::uint64_t mb = 1; mb < 128; ++mb) {
      auto a = mask_set(z7, ma), b = mask_set(z7, mb);
      auto c = kneser_certificate(a, b);
      CHECK(c.valid());
      CHECK(c.h_size == oracle_stabilizer_order(z7, c.sumset.members()));
      if (c.stabilizer.is_trivial()) CHECK(c.sum_size >= std::min<std::size_t>(7, c.a_size + c.b_size - 1));
    }
}

TEST_CASE("kneser exhaustive scans over every group of order <= 12") {
  for (std::uint32_t n = 1; n <= 12; ++n)
    for (const auto& g : abelian_groups_of_order(n)) {
      const auto r = kneser_exhaustive(g);
      CHECK_MESSAGE(r.strict_trivial == 0, g.literal());
      CHECK(r.periodicity_violations == 0);
      CHECK(r.inequality_violations == 0);
    }
  auto z4 = kneser_exhaustive(FiniteAbelianGroup::parse("Z4"));
  CHECK(z4.trivial_small > 0);
  REQUIRE(z4.first_trivial_small);
}

TEST_CASE("reduced kneser scan finds the same kinds of pairs as the unreduced one") {
  for (const char* lit : {"Z6", "Z2xZ4", "Z8", "Z3xZ3"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    const auto full = kneser_exhaustive(g, {false, 1});
    const auto reduced = kneser_exhaustive(g);
    CHECK(full.pairs == ((std::uint64_t{1} << g.size()) - 1) * ((std::uint64_t{1} << g.size()) - 1));
    CHECK(reduced.pairs < full.pairs);
    CHECK((full.trivial_small > 0) == (reduced.trivial_small > 0));
    CHECK(full.strict_trivial == 0);
    CHECK(full.inequality_violations == 0);

    // Independent tally for the unreduced scan.
    std::uint64_t small = 0, trivial_small = 0;
    const std::uint64_t top = std::uint64_t{1} << g.size();
    for (std::uint64_t ma = 1; ma < top; ++ma)
      for (std::uint64_t mb = 1; mb < top; ++mb) {
        auto a = mask_set(g, ma), b = mask_set(g, mb);
        const auto s = oracle_sumset(g, a.members(), b.members());
        if (s.count() >= a.cardinality() + b.cardinality()) continue;
        ++small;
        trivial_small += oracle_stabilizer_order(g, s) == 1;
      }
    CHECK(full.small_pairs == small);
    CHECK(full.trivial_small == trivial_small);
  }
}

TEST_CASE("kneser random scans for orders 19..24") {
  std::uint64_t seed = 40;
  for (std::uint32_t n = 19; n <= 24; ++n)
    for (const auto& g : abelian_groups_of_order(n)) {
      const auto r = kneser_random(g, 2000, seed++);
      CHECK(r.pairs == 2000);
      CHECK_MESSAGE(r.strict_trivial == 0, g.literal());
      CHECK(r.inequality_violations == 0);
      CHECK(r.periodicity_violations == 0);
    }
  CHECK_THROWS_AS(kneser_exhaustive(FiniteAbelianGroup::parse("Z25")), CapacityError);
  CHECK_THROWS_AS(kneser_random(FiniteAbelianGroup::parse("Z33"), 1, 1), CapacityError);
}

TEST_CASE("density point refinement") {
  auto z12 = FiniteAbelianGroup::parse("Z12");
  auto a = set_of(z12, {0, 1, 2, 3, 4, 5});
  std::vector<GroupSubset> u{set_of(z12, {11, 0, 1})};
  // Endpoints see 2 of 3 points, interior points 3 of 3.
  CHECK(density_point_refine(a, u) == a);
  CHECK(density_point_refine(a, u, 0.7) == set_of(z12, {1, 2, 3, 4}));

  std::vector<GroupSubset> chain{set_of(z12, {10, 11, 0, 1, 2}), set_of(z12, {0})};
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto r = random_set(z12, rng);
    CHECK(density_point_refine(r, chain) == r);
  }
  CHECK(density_point_refine(GroupSubset(z12), chain).empty());

  std::vector<GroupSubset> lopsided{set_of(z12, {0, 1})};
  CHECK_THROWS_AS(density_point_refine(a, lopsided), DomainError);
  std::vector<GroupSubset> no_zero{set_of(z12, {1, 11})};
  CHECK_THROWS_AS(density_point_refine(a, no_zero), DomainError);
  std::vector<GroupSubset> growing{set_of(z12, {0}), set_of(z12, {11, 0, 1})};
  CHECK_THROWS_AS(density_point_refine(a, growing), DomainError);
  CHECK_THROWS_AS(density_point_refine(a, u, 0.5), DomainError);
}

TEST_CASE("level set sumset check") {
  auto g = FiniteAbelianGroup::parse("Z10");
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    auto a = random_set(g, rng), b = random_set(g, rng);
    auto r = level_set_sumset_check(GroupFunction::indicator(g, a.members()), GroupFunction::indicator(g, b.members()));
    CHECK(r.contained);
    CHECK(r.level_set.members() == oracle_sumset(g, a.members(), b.members()));
    if (!a.empty() && !b.empty()) CHECK(r.level_set == steinhaus_level_set(a, b));
  }

  auto zero = level_set_sumset_check(GroupFunction(g), GroupFunction::constant(g, 0.5));
  CHECK(zero.support_f.empty());
  CHECK(zero.level_set.empty());
  CHECK(zero.measure_level == 0.0);

  std::uniform_int_distribution<int> num(0, 4);
  for (int t = 0; t < 50; ++t) {
    std::vector<Complex> fv(g.size()), gv(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) {
      fv[x] = num(rng) / 4.0;
      gv[x] = num(rng) / 4.0;
    }
    auto r = level_set_sumset_check(GroupFunction(g, fv), GroupFunction(g, gv));
    CHECK(r.contained);
    // every x = a + b with f(a), g(b) > 0 lies in the level set
    for (std::size_t x = 0; x < g.size(); ++x)
      for (std::size_t y = 0; y < g.size(); ++y)
        if (fv[x].real() > 0 && gv[y].real() > 0) CHECK(r.level_set.contains(g.add_index(x, y)));
  }

  std::vector<Complex> bad(g.size(), 0.5);
  bad[3] = 1.5;
  CHECK_THROWS_AS(level_set_sumset_check(GroupFunction(g, bad), GroupFunction(g)), DomainError);
  bad[3] = Complex(0.5, 0.1);
  CHECK_THROWS_AS(level_set_sumset_check(GroupFunction(g, bad), GroupFunction(g)), DomainError);
}

TEST_CASE("coset union equals the quotient preimage") {
  std::mt19937_64 rng(7);
  for (const char* lit : {"Z2xZ6", "Z12", "Z3xZ3"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    for (const auto& h : enumerate_subgroups(g))
      for (int t = 0; t < 10; ++t) {
        auto c = random_set(g, rng, 0.25);
        auto u = coset_union(c, h);
        CHECK(u == quotient_preimage(c, h));
        for (auto x : u.indices())
          for (auto y : h.elements()) CHECK(u.contains(g.add_index(x, y)));
      }
  }
}

TEST_CASE("abelian groups of small order") {
  CHECK(abelian_groups_of_order(1).size() == 1);
  CHECK(abelian_groups_of_order(8).size() == 3);
  CHECK(abelian_groups_of_order(16).size() == 5);
  CHECK(abelian_groups_of_order(12).size() == 2);
  CHECK(abelian_groups_of_order(12)[1].literal() == "Z2xZ6");
  CHECK(abelian_groups_of_order(18)[1].literal() == "Z3xZ6");
}
