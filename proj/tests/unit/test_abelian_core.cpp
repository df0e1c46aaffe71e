#include <random>
#include <set>

#include "doctest.h"
#include "sumsetlab/abelian_core.hpp"
#include "sumsetlab/error.hpp"

using namespace sumset;

namespace {

// Every subset of G closed under subtraction that contains 0, by brute force over masks.
std::set<std::vector<std::size_t>> brute_force_subgroups(const FiniteAbelianGroup& g) {
  std::set<std::vector<std::size_t>> out;
  const std::size_t n = g.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); mask += 2) {
    bool closed = true;
    for (std::size_t a = 0; a < n && closed; ++a) {
      if (!((mask >> a) & 1)) continue;
      for (std::size_t b = 0; b < n && closed; ++b) {
        if (!((mask >> b) & 1)) continue;
        // direct coordinate arithmetic, independent of index helpers
        auto d = g.add(g.element(a), g.negate(g.element(b)));
        if (!((mask >> g.index_of(d)) & 1)) closed = false;
      }
    }
    if (!closed) continue;
    std::vector<std::size_t> elems;
    for (std::size_t a = 0; a < n; ++a)
      if ((mask >> a) & 1) elems.push_back(a);
    out.insert(elems);
  }
  return out;
}

}  // namespace

TEST_CASE("group literals and sizes") {
  auto g = FiniteAbelianGroup::parse("Z2xZ3xZ5");
  CHECK(g.size() == 30);
  CHECK(g.rank() == 3);
  CHECK(g.exponent() == 30);
  CHECK(g.literal() == "Z2xZ3xZ5");
  CHECK(FiniteAbelianGroup::parse(" z4 ").literal() == "Z4");
  CHECK_THROWS_AS(FiniteAbelianGroup::parse("Z0"), DomainError);
  CHECK_THROWS_AS(FiniteAbelianGroup::parse("Q4"), DomainError);
  CHECK_THROWS_AS(FiniteAbelianGroup::parse(""), DomainError);
  CHECK_THROWS_AS(FiniteAbelianGroup::parse("Z2x"), DomainError);
}

TEST_CASE("mixed-radix index is a little-endian bijection") {
  auto g = FiniteAbelianGroup::parse("Z2xZ3");
  CHECK(g.element(1).coords == std::vector<std::uint32_t>{1, 0});
  CHECK(g.element(2).coords == std::vector<std::uint32_t>{0, 1});
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.index_of(g.element(i)) == i);
}

TEST_CASE("add") {
  auto z4 = FiniteAbelianGroup::parse("Z4");
  CHECK(z4.add(GroupElement{{3}}, GroupElement{{2}}).coords == std::vector<std::uint32_t>{1});
  auto g = FiniteAbelianGroup::parse("Z2xZ3");
  CHECK(g.add(GroupElement{{1, 2}}, GroupElement{{1, 2}}).coords == std::vector<std::uint32_t>{0, 1});
  const auto x = GroupElement{{1, 2}};
  CHECK(g.add(x, g.identity()) == x);
  CHECK_THROWS_AS(g.add(GroupElement{{1}}, x), StructuralError);
  CHECK_THROWS_AS(g.add(GroupElement{{2, 0}}, x), StructuralError);
}

TEST_CASE("index arithmetic agrees with coordinate arithmetic") {
  auto g = FiniteAbelianGroup::parse("Z4xZ6xZ5");
  for (std::size_t a = 0; a < g.size(); a += 7)
    for (std::size_t b = 0; b < g.size(); b += 5) {
      CHECK(g.add_index(a, b) == g.index_of(g.add(g.element(a), g.element(b))));
      CHECK(g.sub_index(a, b) == g.index_of(g.add(g.element(a), g.negate(g.element(b)))));
    }
}

TEST_CASE("char_eval") {
  auto z4 = FiniteAbelianGroup::parse("Z4");
  auto v = z4.char_eval(CharacterIndex{{1}}, GroupElement{{1}});
  CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.imag() == doctest::Approx(1.0));
  auto k = FiniteAbelianGroup::parse("Z2xZ2");
  CHECK(std::abs(k.char_eval(CharacterIndex{{1, 1}}, GroupElement{{1, 1}}) - 1.0) < 1e-15);
  auto g = FiniteAbelianGroup::parse("Z3xZ8");
  for (std::size_t x = 0; x < g.size(); ++x) CHECK(g.char_eval_index(0, x) == std::complex<double>(1.0, 0.0));
  CHECK_THROWS_AS(g.char_eval(CharacterIndex{{1}}, GroupElement{{1, 1}}), StructuralError);
}

TEST_CASE("characters are unit-modulus homomorphisms") {
  auto g = FiniteAbelianGroup::parse("Z6xZ10xZ7");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t chi = pick(rng), x = pick(rng), y = pick(rng);
    const auto cx = g.char_eval_index(chi, x);
    CHECK(std::abs(std::abs(cx) - 1.0) < 1e-12);
    CHECK(std::abs(g.char_eval_index(chi, g.add_index(x, y)) - cx * g.char_eval_index(chi, y)) < 1e-12);
  }
}

TEST_CASE("character orthogonality") {
  for (const char* lit : {"Z12", "Z2xZ3xZ5", "Z4xZ4"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) {
        std::complex<double> s{};
        for (std::size_t x = 0; x < g.size(); ++x) s += g.char_eval_index(a, x) * std::conj(g.char_eval_index(b, x));
        s /= static_cast<double>(g.size());
        CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("element literals") {
  auto g = FiniteAbelianGroup::parse("Z2xZ3");
  CHECK(parse_element(g, "(1,2)").coords == std::vector<std::uint32_t>{1, 2});
  CHECK(parse_element(g, "(-1, 4)").coords == std::vector<std::uint32_t>{1, 1});
  CHECK(format_element(parse_element(g, "(1,2)")) == "(1,2)");
  CHECK(parse_element(FiniteAbelianGroup::parse("Z7"), "9").coords == std::vector<std::uint32_t>{2});
  CHECK_THROWS_AS(parse_element(g, "(1,2,3)"), StructuralError);
  CHECK_THROWS_AS(parse_element(g, "(1,a)"), DomainError);
}

TEST_CASE("enumerate_subgroups matches brute-force closure") {
  auto z4 = FiniteAbelianGroup::parse("Z4");
  auto subs = enumerate_subgroups(z4);
  REQUIRE(subs.size() == 3);
  CHECK(std::vector<std::size_t>(subs[0].elements().begin(), subs[0].elements().end()) == std::vector<std::size_t>{0});
  CHECK(std::vector<std::size_t>(subs[1].elements().begin(), subs[1].elements().end()) ==
        std::vector<std::size_t>{0, 2});
  CHECK(subs[2].order() == 4);

  CHECK(enumerate_subgroups(FiniteAbelianGroup::parse("Z13")).size() == 2);
  CHECK(enumerate_subgroups(FiniteAbelianGroup::parse("Z2xZ2")).size() == 5);

  for (const char* lit : {"Z12", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Z2xZ6", "Z16", "Z4xZ4"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    const auto oracle = brute_force_subgroups(g);
    const auto got = enumerate_subgroups(g);
    std::set<std::vector<std::size_t>> got_set;
    for (const auto& h : got) got_set.insert(std::vector<std::size_t>(h.elements().begin(), h.elements().end()));
    CHECK_MESSAGE(got_set == oracle, lit);
    CHECK(got.size() == oracle.size());
  }
}

TEST_CASE("subgroup cosets partition the group") {
  auto g = FiniteAbelianGroup::parse("Z2xZ6");
  for (const auto& h : enumerate_subgroups(g)) {
    std::vector<int> covered(g.size(), 0);
    std::set<std::size_t> reps;
    for (std::size_t x = 0; x < g.size(); ++x) {
      const auto c = h.coset(x);
      CHECK(c.size() == h.order());
      reps.insert(h.coset_representative(x));
    }
    CHECK(reps.size() == h.index());
    for (auto r : reps)
      for (auto y : h.coset(r)) ++covered[y];
    for (auto c : covered) CHECK(c == 1);
  }
}

TEST_CASE("subgroup enumeration caps") {
  CHECK_THROWS_AS(enumerate_subgroups(FiniteAbelianGroup::parse("Z4097")), CapacityError);
  CHECK_THROWS_AS(enumerate_subgroups(FiniteAbelianGroup::parse("Z2xZ2xZ2xZ2"), {4096, 10}), CapacityError);
}

TEST_CASE("stabilizer") {
  auto z6 = FiniteAbelianGroup::parse("Z6");
  std::vector<std::size_t> evens{0, 2, 4};
  auto h = stabilizer(z6, evens);
  CHECK(std::vector<std::size_t>(h.elements().begin(), h.elements().end()) == evens);
  std::vector<std::size_t> s01{0, 1};
  CHECK(stabilizer(z6, s01).is_trivial());
  std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  CHECK(stabilizer(z6, all).order() == 6);
  CHECK_THROWS_AS(stabilizer(z6, std::vector<std::size_t>{}), DomainError);
}

TEST_CASE("stabilizer is a fixed point and the largest period group") {
  auto g = FiniteAbelianGroup::parse("Z2xZ6");
  std::mt19937_64 rng(5);
  const auto subs = enumerate_subgroups(g);
  for (int trial = 0; trial < 300; ++trial) {
    Bitset s(g.size());
    for (std::size_t x = 0; x < g.size(); ++x)
      if (rng() % 3 == 0) s.set(x);
    if (s.none()) continue;
    auto h = stabilizer(g, s);
    for (auto x : s.indices())
      for (auto y : h.elements()) CHECK(s.test(g.add_index(x, y)));
    for (const auto& k : subs) {
      bool periodic = true;
      for (auto x : s.indices())
        for (auto y : k.elements()) periodic = periodic && s.test(g.add_index(x, y));
      if (periodic) CHECK(k.members().is_subset_of(h.members()));
    }
  }
}

TEST_CASE("automorphisms are bijective homomorphisms") {
  auto g = FiniteAbelianGroup::parse("Z2xZ4");
  auto auts = automorphisms(g, 1000);
  CHECK(auts.size() == 8);  // |Aut(Z2 x Z4)| = 8
  for (const auto& p : auts)
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) CHECK(p[g.add_index(a, b)] == g.add_index(p[a], p[b]));
  CHECK(automorphisms(FiniteAbelianGroup::parse("Z18"), 100).size() == 6);
  CHECK(automorphisms(FiniteAbelianGroup::parse("Z2xZ2xZ2"), 1000).size() == 168);
}
