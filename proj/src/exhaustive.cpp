// Pair scans over small groups with subsets packed into 32-bit masks (bit i = element index i).
//
// The reduced scans fix 0 in A and 0 in B and keep only one A per orbit of
// A -> phi(A - a) (a in A, phi from a sample of automorphisms). For a fixed A the
// sumsets of all B are filled by the DP S[m] = S[m with lowest bit cleared] | (A + x).

#include <bit>
#include <random>

#include "sumsetlab/error.hpp"
#include "sumsetlab/kernels.hpp"
#include "sumsetlab/sumset_lab.hpp"

namespace sumset {

namespace {

using Mask = std::uint32_t;

constexpr std::size_t kMaxMaskBits = 32;
constexpr std::size_t kMaxExhaustiveBits = 24;

/// Applies an index permutation to masks via one 256-entry table per byte.
class MaskMap {
 public:
  MaskMap(std::size_t n, const std::vector<std::uint32_t>& perm) : bytes_((n + 7) / 8), table_(bytes_ * 256, 0) {
    for (std::size_t byte = 0; byte < bytes_; ++byte)
      for (std::size_t v = 0; v < 256; ++v) {
        Mask out = 0;
        for (std::size_t k = 0; k < 8; ++k) {
          const std::size_t i = byte * 8 + k;
          if (i < n && ((v >> k) & 1)) out |= Mask{1} << perm[i];
        }
        table_[byte * 256 + v] = out;
      }
  }

  Mask operator()(Mask m) const noexcept {
    Mask out = 0;
    for (std::size_t byte = 0; byte < bytes_; ++byte) out |= table_[byte * 256 + ((m >> (8 * byte)) & 0xff)];
    return out;
  }

 private:
  std::size_t bytes_;
  std::vector<Mask> table_;
};

struct MaskGroup {
  explicit MaskGroup(const FiniteAbelianGroup& grp) : g(grp), n(grp.size()) {
    if (n > kMaxMaskBits) throw CapacityError("mask scans need |G| <= 32, got " + std::to_string(n));
    full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
    std::vector<std::uint32_t> perm(n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) perm[y] = static_cast<std::uint32_t>(g.add_index(y, x));
      translate.emplace_back(n, perm);
    }
  }

  Mask shift(Mask m, std::size_t x) const { return translate[x](m); }

  /// A + H for H given as a mask.
  Mask plus(Mask a, Mask h) const {
    Mask out = 0;
    for (Mask r = h; r; r &= r - 1) out |= shift(a, static_cast<std::size_t>(std::countr_zero(r)));
    return out;
  }

  Mask stabilizer(Mask s) const {
    // Periods are translation invariant; once s contains 0 every period lies in s.
    if (!(s & 1)) s = shift(s, g.neg_index(static_cast<std::size_t>(std::countr_zero(s))));
    Mask h = 0;
    for (Mask r = s; r; r &= r - 1) {
      const auto x = static_cast<std::size_t>(std::countr_zero(r));
      if (shift(s, x) == s) h |= Mask{1} << x;
    }
    return h;
  }

  std::string literal(Mask m) const {
    Bitset b(n);
    for (Mask r = m; r; r &= r - 1) b.set(static_cast<std::size_t>(std::countr_zero(r)));
    return GroupSubset(g, std::move(b)).literal();
  }

  FiniteAbelianGroup g;
  std::size_t n;
  Mask full;
  std::vector<MaskMap> translate;
};

std::vector<Mask> summand_representatives(const MaskGroup& mg, const ScanOptions& options) {
  std::vector<Mask> reps;
  const std::size_t n = mg.n;
  if (!options.reduce_by_symmetry) {
    for (std::uint64_t m = 1; m <= mg.full; ++m) reps.push_back(static_cast<Mask>(m));
    return reps;
  }
  std::vector<MaskMap> auts;
  for (const auto& p : automorphisms(mg.g, std::max<std::size_t>(1, options.automorphism_limit))) auts.emplace_back(n, p);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n - 1)); ++m) {
    const Mask a = static_cast<Mask>(1 | (m << 1));
    bool canonical = true;
    for (Mask r = a; r && canonical; r &= r - 1) {
      const Mask t = mg.shift(a, mg.g.neg_index(static_cast<std::size_t>(std::countr_zero(r))));
      for (const auto& phi : auts)
        if (phi(t) < a) {
          canonical = false;
          break;
        }
    }
    if (canonical) reps.push_back(a);
  }
  return reps;
}

/// Calls visit(a, b, a_plus_b, a_translates) for every pair, A from `reps`.
/// Reduced scans take B over sets containing 0, otherwise over all nonempty sets.
/// Per-A results come back in rep order so reports are independent of thread count.
template <class Result, class Visit>
std::vector<Result> scan_pairs(const MaskGroup& mg, const std::vector<Mask>& reps, bool reduced, Visit visit) {
  const std::size_t n = mg.n;
  if (n > kMaxExhaustiveBits) throw CapacityError("exhaustive pair scans need |G| <= 24");
  const std::size_t free_bits = reduced ? n - 1 : n;
  const std::uint64_t count = std::uint64_t{1} << free_bits;
  std::vector<Result> results(reps.size());
#pragma omp parallel
  {
    std::vector<Mask> sums(count);
    std::vector<Mask> at(n);
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(reps.size()); ++i) {
      const Mask a = reps[static_cast<std::size_t>(i)];
      for (std::size_t x = 0; x < n; ++x) at[x] = mg.shift(a, x);
      Result& r = results[static_cast<std::size_t>(i)];
      sums[0] = reduced ? a : 0;
      if (reduced) visit(r, a, Mask{1}, a, at.data());
      for (std::uint64_t m = 1; m < count; ++m) {
        const auto low = static_cast<std::size_t>(std::countr_zero(m)) + (reduced ? 1 : 0);
        const Mask s = sums[m & (m - 1)] | at[low];
        sums[m] = s;
        const Mask b = reduced ? static_cast<Mask>(1 | (m << 1)) : static_cast<Mask>(m);
        visit(r, a, b, s, at.data());
      }
    }
  }
  return results;
}

struct KneserPartial {
  std::uint64_t pairs = 0, small = 0, trivial_small = 0, strict = 0, strict_trivial = 0;
  std::uint64_t periodicity = 0, inequality = 0;
  std::optional<std::pair<Mask, Mask>> first_trivial, first_inequality;
};

void kneser_visit(const MaskGroup& mg, KneserPartial& r, Mask a, Mask b, Mask s, const Mask* at) {
  ++r.pairs;
  const int pa = std::popcount(a), pb = std::popcount(b), ps = std::popcount(s);
  if (ps >= pa + pb) return;
  ++r.small;
  const bool strict = ps <= pa + pb - 2;
  r.strict += strict;
  if (s == mg.full) return;  // H = G: periodic, and |G| >= |G| + |G| - |G|
  const Mask h = mg.stabilizer(s);
  const int ph = std::popcount(h);
  if (ph == 1) {
    ++r.trivial_small;
    r.strict_trivial += strict;
    if (!r.first_trivial) r.first_trivial = {a, b};
  }
  Mask s_plus_h = 0, a_plus_h = 0;
  for (Mask t = h; t; t &= t - 1) {
    const auto x = static_cast<std::size_t>(std::countr_zero(t));
    s_plus_h |= mg.shift(s, x);
    a_plus_h |= at[x];
  }
  if (s_plus_h != s) ++r.periodicity;
  if (ps + ph < std::popcount(a_plus_h) + std::popcount(mg.plus(b, h))) {
    ++r.inequality;
    if (!r.first_inequality) r.first_inequality = {a, b};
  }
}

KneserScanReport merge_kneser(const MaskGroup& mg, const std::vector<KneserPartial>& parts) {
  KneserScanReport out;
  out.group = mg.g.literal();
  for (const auto& p : parts) {
    out.pairs += p.pairs;
    out.small_pairs += p.small;
    out.trivial_small += p.trivial_small;
    out.strict_small_pairs += p.strict;
    out.strict_trivial += p.strict_trivial;
    out.periodicity_violations += p.periodicity;
    out.inequality_violations += p.inequality;
    if (p.first_trivial && !out.first_trivial_small)
      out.first_trivial_small = PairWitness{mg.literal(p.first_trivial->first), mg.literal(p.first_trivial->second)};
    if (p.first_inequality && !out.first_inequality_violation)
      out.first_inequality_violation =
          PairWitness{mg.literal(p.first_inequality->first), mg.literal(p.first_inequality->second)};
  }
  return out;
}

Mask random_nonempty(std::size_t n, std::mt19937_64& rng) {
  // Density drawn per set so small and large summands both show up.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const double p = unit(rng);
    Mask m = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (unit(rng) < p) m |= Mask{1} << i;
    if (m) return m;
  }
}

}  // namespace

KneserScanReport kneser_exhaustive(const FiniteAbelianGroup& g, ScanOptions options) {
  const MaskGroup mg(g);
  if (mg.n > kMaxExhaustiveBits) throw CapacityError("exhaustive pair scans need |G| <= 24");
  const auto reps = summand_representatives(mg, options);
  const auto parts = scan_pairs<KneserPartial>(
      mg, reps, options.reduce_by_symmetry,
      [&](KneserPartial& r, Mask a, Mask b, Mask s, const Mask* at) { kneser_visit(mg, r, a, b, s, at); });
  return merge_kneser(mg, parts);
}

KneserScanReport kneser_random(const FiniteAbelianGroup& g, std::uint64_t pairs, std::uint64_t seed) {
  const MaskGroup mg(g);
  std::mt19937_64 rng(seed);
  std::vector<KneserPartial> part(1);
  std::vector<Mask> at(mg.n);
  for (std::uint64_t i = 0; i < pairs; ++i) {
    // Translate both summands to contain 0; every checked quantity is translation invariant.
    Mask a = random_nonempty(mg.n, rng), b = random_nonempty(mg.n, rng);
    a = mg.shift(a, g.neg_index(static_cast<std::size_t>(std::countr_zero(a))));
    b = mg.shift(b, g.neg_index(static_cast<std::size_t>(std::countr_zero(b))));
    for (std::size_t x = 0; x < mg.n; ++x) at[x] = mg.shift(a, x);
    kneser_visit(mg, part[0], a, b, mg.plus(b, a), at.data());
  }
  return merge_kneser(mg, part);
}

PigeonholeScanReport pigeonhole_exhaustive(const FiniteAbelianGroup& g, ScanOptions options) {
  struct Partial {
    std::uint64_t pairs = 0, forced = 0, violations = 0;
    std::optional<std::pair<Mask, Mask>> first;
  };
  const MaskGroup mg(g);
  if (mg.n > kMaxExhaustiveBits) throw CapacityError("exhaustive pair scans need |G| <= 24");
  const auto reps = summand_representatives(mg, options);
  const int n = static_cast<int>(mg.n);
  const auto parts = scan_pairs<Partial>(mg, reps, options.reduce_by_symmetry,
                                         [&](Partial& r, Mask a, Mask b, Mask s, const Mask*) {
                                           ++r.pairs;
                                           if (std::popcount(a) + std::popcount(b) <= n) return;
                                           ++r.forced;
                                           if (s != mg.full) {
                                             ++r.violations;
                                             if (!r.first) r.first = {a, b};
                                           }
                                         });
  PigeonholeScanReport out;
  out.group = g.literal();
  for (const auto& p : parts) {
    out.pairs += p.pairs;
    out.forced_pairs += p.forced;
    out.violations += p.violations;
    if (p.first && !out.first_violation)
      out.first_violation = PairWitness{mg.literal(p.first->first), mg.literal(p.first->second)};
  }
  return out;
}

SteinhausScanReport steinhaus_exhaustive(const FiniteAbelianGroup& g) {
  const MaskGroup mg(g);
  const std::size_t n = mg.n;
  if (n > 16) throw CapacityError("exhaustive Steinhaus scan needs |G| <= 16");
  const std::size_t subsets = std::size_t{1} << n;

  // Spectra of every indicator through the library transform.
  std::vector<Complex> spectra(subsets * n);
  for (std::size_t m = 1; m < subsets; ++m) {
    Bitset b(n);
    for (std::size_t i = 0; i < n; ++i)
      if ((m >> i) & 1) b.set(i);
    const auto s = dft(GroupFunction::indicator(g, b));
    std::copy(s.coefficients.begin(), s.coefficients.end(), spectra.begin() + static_cast<std::ptrdiff_t>(m * n));
  }

  struct Partial {
    std::uint64_t pairs = 0, mismatches = 0;
    std::optional<std::pair<Mask, Mask>> first;
  };
  std::vector<Mask> reps(subsets - 1);
  for (std::size_t m = 1; m < subsets; ++m) reps[m - 1] = static_cast<Mask>(m);
  const double tau = steinhaus_threshold(g);

  std::vector<Partial> parts(reps.size());
#pragma omp parallel
  {
    kernels::AxesPlan plan(g);
    std::vector<Complex> h(n);
    std::vector<Mask> sums(subsets);
    std::vector<Mask> at(n);
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(reps.size()); ++i) {
      const Mask a = reps[static_cast<std::size_t>(i)];
      Partial& r = parts[static_cast<std::size_t>(i)];
      for (std::size_t x = 0; x < n; ++x) at[x] = mg.shift(a, x);
      const Complex* sa = spectra.data() + static_cast<std::size_t>(a) * n;
      sums[0] = 0;
      for (std::size_t b = 1; b < subsets; ++b) {
        sums[b] = sums[b & (b - 1)] | at[static_cast<std::size_t>(std::countr_zero(b))];
        const Complex* sb = spectra.data() + b * n;
        for (std::size_t k = 0; k < n; ++k) h[k] = sa[k] * sb[k];
        plan.execute(h, +1);
        Mask level = 0;
        for (std::size_t x = 0; x < n; ++x)
          if (h[x].real() > tau) level |= Mask{1} << x;
        ++r.pairs;
        if (level != sums[b]) {
          ++r.mismatches;
          if (!r.first) r.first = {a, static_cast<Mask>(b)};
        }
      }
    }
  }

  SteinhausScanReport out;
  out.group = g.literal();
  for (const auto& p : parts) {
    out.pairs += p.pairs;
    out.mismatches += p.mismatches;
    if (p.first && !out.first_mismatch)
      out.first_mismatch = PairWitness{mg.literal(p.first->first), mg.literal(p.first->second)};
  }
  return out;
}

SteinhausScanReport steinhaus_random(const FiniteAbelianGroup& g, std::uint64_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    for (;;) {
      const double p = unit(rng);
      Bitset b(g.size());
      for (std::size_t i = 0; i < g.size(); ++i)
        if (unit(rng) < p) b.set(i);
      if (b.any()) return GroupSubset(g, std::move(b));
    }
  };
  SteinhausScanReport out;
  out.group = g.literal();
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const GroupSubset a = draw(), b = draw();
    ++out.pairs;
    if (!(steinhaus_level_set(a, b) == sumset(a, b))) {
      ++out.mismatches;
      if (!out.first_mismatch) out.first_mismatch = PairWitness{a.literal(), b.literal()};
    }
  }
  return out;
}

}  // namespace sumset
