#include <random>

#include "doctest.h"
#include "sumsetlab/error.hpp"
#include "sumsetlab/kernels.hpp"
#include "sumsetlab/spectral.hpp"

using namespace sumset;

namespace {

GroupFunction random_function(const FiniteAbelianGroup& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<Complex> v(g.size());
  for (auto& x : v) x = {d(rng), d(rng)};
  return GroupFunction(g, std::move(v));
}

Bitset random_subset(std::size_t n, std::mt19937_64& rng) {
  Bitset s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1) s.set(i);
  return s;
}

}  // namespace

TEST_CASE("dft of point mass, constant and character") {
  auto g = FiniteAbelianGroup::parse("Z10");
  for (auto c : dft(GroupFunction::delta(g, 0)).coefficients) CHECK(std::abs(c - 0.1) < 1e-15);

  auto s = dft(GroupFunction::constant(g, 1.0));
  CHECK(std::abs(s.coefficients[0] - 1.0) < 1e-15);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(std::abs(s.coefficients[i]) < 1e-15);

  auto z4 = FiniteAbelianGroup::parse("Z4");
  auto sc = dft(GroupFunction::character(z4, 1));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(sc.coefficients[i] - (i == 1 ? 1.0 : 0.0)) < 1e-15);
}

TEST_CASE("FFT transform matches the naive character sum and inverts") {
  std::mt19937_64 rng(1);
  for (const char* lit : {"Z1", "Z2", "Z12", "Z17", "Z2xZ3xZ5", "Z64", "Z9xZ4", "Z7xZ11", "Z97", "Z8xZ8xZ2"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    auto f = random_function(g, rng);
    std::vector<Complex> naive(g.size());
    kernels::serial::dft_naive(g, f.values(), naive, -1);
    auto s = dft(f);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(std::abs(s.coefficients[i] - naive[i] / static_cast<double>(g.size())) < 1e-10);
    CHECK(sup_distance(inverse_dft(s), f) < 1e-9);
  }
}

TEST_CASE("convolve against counting oracle") {
  std::mt19937_64 rng(2);
  auto g = FiniteAbelianGroup::parse("Z3xZ4");
  for (int trial = 0; trial < 50; ++trial) {
    const Bitset a = random_subset(g.size(), rng), b = random_subset(g.size(), rng);
    auto h = convolve(GroupFunction::indicator(g, a), GroupFunction::indicator(g, b));
    for (std::size_t x = 0; x < g.size(); ++x) {
      std::size_t count = 0;  // |A cap (x - B)|
      for (std::size_t t = 0; t < g.size(); ++t)
        if (a.test(t) && b.test(g.sub_index(x, t))) ++count;
      CHECK(std::abs(h(x) - static_cast<double>(count) / static_cast<double>(g.size())) < 1e-12);
    }
  }
}

TEST_CASE("convolve examples") {
  auto z2 = FiniteAbelianGroup::parse("Z2");
  auto h = convolve(GroupFunction::delta(z2, 0), GroupFunction::delta(z2, 1));
  CHECK(std::abs(h(0)) < 1e-15);
  CHECK(std::abs(h(1) - 0.5) < 1e-15);

  std::mt19937_64 rng(3);
  auto g = FiniteAbelianGroup::parse("Z2xZ9");
  auto f = random_function(g, rng);
  auto unit = static_cast<double>(g.size()) * GroupFunction::delta(g, 0);
  CHECK(sup_distance(convolve(f, unit), f) < 1e-12);

  CHECK_THROWS_AS(convolve(f, GroupFunction(FiniteAbelianGroup::parse("Z18"))), StructuralError);
}

TEST_CASE("convolution algebra") {
  std::mt19937_64 rng(4);
  for (const char* lit : {"Z12", "Z2xZ3xZ5", "Z5xZ5"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    for (int trial = 0; trial < 20; ++trial) {
      auto f = random_function(g, rng), h = random_function(g, rng);
      auto fh = convolve(f, h);
      CHECK(sup_distance(fh, convolve(h, f)) < 1e-10);
      auto sfh = dft(fh), sf = dft(f), sh = dft(h);
      for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(sfh.coefficients[i] - sf.coefficients[i] * sh.coefficients[i]) < 1e-10);
      CHECK(std::abs(fh.integral() - f.integral() * h.integral()) < 1e-10);
    }
  }
}

TEST_CASE("FFT convolution equals direct oracle up to |G| = 4096") {
  std::mt19937_64 rng(5);
  for (const char* lit : {"Z4096", "Z64xZ64", "Z2xZ3xZ5xZ7", "Z4093", "Z16xZ16xZ16"}) {
    auto g = FiniteAbelianGroup::parse(lit);
    auto f = random_function(g, rng), h = random_function(g, rng);
    CHECK_MESSAGE(sup_distance(convolve(f, h), convolve_direct(f, h)) < 1e-9, lit);
  }
}

TEST_CASE("convolution_expansion_check") {
  std::mt19937_64 rng(6);
  auto g = FiniteAbelianGroup::parse("Z12");
  for (int i = 0; i < 20; ++i) CHECK(convolution_expansion_check(random_function(g, rng), random_function(g, rng)) <= 1e-9);
  auto one = GroupFunction::constant(g, 1.0);
  CHECK(convolution_expansion_check(one, one) < 1e-14);
  auto chi = GroupFunction::character(g, 1), psi = GroupFunction::character(g, 5);
  CHECK(convolution_expansion_check(chi, psi) < 1e-14);
  const auto direct = convolve_direct(chi, psi);
  for (auto v : direct.values()) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("parseval and bessel") {
  std::mt19937_64 rng(7);
  auto z8 = FiniteAbelianGroup::parse("Z8");
  Bitset a(8);
  a.set(0);
  a.set(1);
  auto fa = GroupFunction::indicator(z8, a);
  CHECK(parseval_check(fa, fa) < 1e-15);
  CHECK(std::abs(dft(fa).energy() - 0.25) < 1e-15);
  CHECK(std::abs(inner_product(fa, fa) - 0.25) < 1e-15);
  CHECK(parseval_check(GroupFunction::character(z8, 2), GroupFunction::character(z8, 3)) < 1e-15);

  auto g = FiniteAbelianGroup::parse("Z3xZ7");
  for (int i = 0; i < 20; ++i) {
    auto f = random_function(g, rng), h = random_function(g, rng);
    CHECK(parseval_check(f, h) <= 1e-9);
    // [0,1]-valued: partial spectral energy never exceeds the L2 norm, full energy equals it.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> vals(g.size());
    for (auto& v : vals) v = u(rng);
    GroupFunction p(g, vals);
    auto s = dft(p);
    const double l2 = inner_product(p, p).real();
    double partial = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      partial += std::norm(s.coefficients[k]);
      CHECK(partial <= l2 + 1e-12);
    }
    CHECK(std::abs(partial - l2) < 1e-9);
  }
}

TEST_CASE("matrix coefficients of the shift action") {
  auto g = FiniteAbelianGroup::parse("Z6xZ2");
  for (std::size_t c = 0; c < g.size(); ++c) {
    auto chi = GroupFunction::character(g, c);
    auto phi = matrix_coefficient(chi, chi);
    for (std::size_t y = 0; y < g.size(); ++y) CHECK(std::abs(phi(y) - g.char_eval_index(c, y)) < 1e-12);
  }
  auto one = GroupFunction::constant(g, 1.0);
  const auto flat = matrix_coefficient(one, one);
  for (auto v : flat.values()) CHECK(std::abs(v - 1.0) < 1e-15);

  std::mt19937_64 rng(8);
  auto w = random_function(g, rng);
  auto phi = matrix_coefficient(w, w);
  // Independent route: coefficients by naive character sums, then sum_chi |w^(chi)|^2 chi(y).
  std::vector<Complex> naive(g.size());
  kernels::serial::dft_naive(g, w.values(), naive, -1);
  for (std::size_t y = 0; y < g.size(); ++y) {
    Complex s{};
    for (std::size_t c = 0; c < g.size(); ++c)
      s += std::norm(naive[c] / static_cast<double>(g.size())) * g.char_eval_index(c, y);
    CHECK(std::abs(phi(y) - s) < 1e-12);
  }
}

TEST_CASE("bochner_check") {
  auto g = FiniteAbelianGroup::parse("Z9");
  auto d0 = GroupFunction::delta(g, 0);
  auto phi = matrix_coefficient(d0, d0);
  for (std::size_t y = 0; y < g.size(); ++y) CHECK(std::abs(phi(y) - (y == 0 ? 1.0 / 9.0 : 0.0)) < 1e-15);
  for (auto w : spectral_measure(d0).weights) CHECK(std::abs(w - 1.0 / 81.0) < 1e-15);
  CHECK(bochner_check(d0) < 1e-14);

  auto sigma = spectral_measure(GroupFunction::constant(g, 1.0));
  CHECK(std::abs(sigma.weights[0] - 1.0) < 1e-15);
  CHECK(std::abs(sigma.total_mass() - 1.0) < 1e-14);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) CHECK(bochner_check(random_function(g, rng)) <= 1e-9);
}

TEST_CASE("polarization_check") {
  std::mt19937_64 rng(10);
  auto g = FiniteAbelianGroup::parse("Z2xZ5");
  auto v = random_function(g, rng);
  CHECK(polarization_check(v, v) < 1e-12);
  auto chi = GroupFunction::character(g, 3), psi = GroupFunction::character(g, 7);
  const auto cross = matrix_coefficient(psi, chi);
  for (auto x : cross.values()) CHECK(std::abs(x) < 1e-15);
  CHECK(polarization_check(chi, psi) < 1e-12);
  for (int i = 0; i < 20; ++i) CHECK(polarization_check(random_function(g, rng), random_function(g, rng)) <= 1e-9);
  CHECK_THROWS_AS(polarization_check(v, GroupFunction(FiniteAbelianGroup::parse("Z10"))), StructuralError);
}

TEST_CASE("group function shape errors") {
  auto g = FiniteAbelianGroup::parse("Z4");
  CHECK_THROWS_AS(GroupFunction(g, std::vector<Complex>(3)), StructuralError);
  CHECK_THROWS_AS(GroupFunction::indicator(g, Bitset(5)), StructuralError);
}
