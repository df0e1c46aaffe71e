#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumsetlab/abelian_core.hpp"
#include "sumsetlab/bitset.hpp"
#include "sumsetlab/spectral.hpp"

namespace sumset {

class GroupSubset {
 public:
  explicit GroupSubset(const FiniteAbelianGroup& g) : group_(g), members_(g.size()) {}
  GroupSubset(const FiniteAbelianGroup& g, Bitset members);

  static GroupSubset from_indices(const FiniteAbelianGroup& g, std::span<const std::size_t> indices);
  static GroupSubset full(const FiniteAbelianGroup& g);
  /// "{0,2,4}" (element indices, or element tuples "{(0,1),(1,2)}"), or a hex bitmask "0x15" (bit i = index i).
  static GroupSubset parse(const FiniteAbelianGroup& g, std::string_view literal);
  /// "{0,2,4}" for rank-1 groups, "{(0,1),(1,2)}" otherwise.
  std::string literal() const;

  const FiniteAbelianGroup& group() const noexcept { return group_; }
  const Bitset& members() const noexcept { return members_; }
  std::size_t cardinality() const noexcept { return members_.count(); }
  double density() const noexcept {
    return static_cast<double>(cardinality()) / static_cast<double>(group_.size());
  }
  bool contains(std::size_t x) const noexcept { return members_.test(x); }
  bool empty() const noexcept { return members_.none(); }
  std::vector<std::size_t> indices() const { return members_.indices(); }

  friend bool operator==(const GroupSubset& a, const GroupSubset& b) {
    return a.group_ == b.group_ && a.members_ == b.members_;
  }

 private:
  FiniteAbelianGroup group_;
  Bitset members_;
};

/// {a + b : a in A, b in B}; empty when either input is empty.
GroupSubset sumset(const GroupSubset& a, const GroupSubset& b);

/// Minimal positive value of 1_A * 1_B is 1/|G|; the level set is cut at half of it.
inline double steinhaus_threshold(const FiniteAbelianGroup& g) { return 0.5 / static_cast<double>(g.size()); }

/// {x : 1_A * 1_B (x) > 1/(2|G|)} with the convolution taken on the FFT path.
GroupSubset steinhaus_level_set(const GroupSubset& a, const GroupSubset& b);

struct PigeonholeReport {
  bool forced = false;     // |A| + |B| > |G|
  bool full = false;       // A + B == G
  bool violation = false;  // forced but not full
};
PigeonholeReport pigeonhole_fill_check(const GroupSubset& a, const GroupSubset& b);

struct KneserCertificate {
  Subgroup stabilizer;
  GroupSubset sumset;
  std::size_t a_size = 0, b_size = 0, sum_size = 0;
  std::size_t a_plus_h = 0, b_plus_h = 0, h_size = 0;
  bool periodic = false;         // A + B + H == A + B
  bool small_sumset = false;     // |A + B| < |A| + |B|
  bool satisfied_inequality = false;  // |A + B| >= |A + H| + |B + H| - |H|

  bool valid() const noexcept { return periodic && satisfied_inequality; }
};

/// Stabilizer certificate for A + B. Throws DomainError for empty input.
KneserCertificate kneser_certificate(const GroupSubset& a, const GroupSubset& b);

/// {x in A : |A cap (U_n + x)| > threshold * |U_n| for some n}.
/// Neighborhoods must be symmetric, contain 0, and decrease by inclusion; threshold in (0.5, 1].
GroupSubset density_point_refine(const GroupSubset& a, std::span<const GroupSubset> neighborhoods,
                                 double threshold = 0.6);

struct LevelSetReport {
  GroupSubset support_f;  // {f > 0}
  GroupSubset support_g;  // {g > 0}
  GroupSubset level_set;  // {f * g > tau}
  double tau = 0;
  bool contained = false;  // support_f + support_g subset of level_set
  double measure_f = 0, measure_g = 0, measure_level = 0;
};

/// For [0,1]-valued f, g checks {f>0} + {g>0} is inside {f*g > 0}. Throws DomainError for values outside [0,1].
LevelSetReport level_set_sumset_check(const GroupFunction& f, const GroupFunction& g);

/// C + H.
GroupSubset coset_union(const GroupSubset& c, const Subgroup& h);
/// rho^{-1}(rho(C)) for the quotient map rho: G -> G/H, via coset representatives.
GroupSubset quotient_preimage(const GroupSubset& c, const Subgroup& h);

// Exhaustive and randomized scans over pairs (A, B). The mask-based scans need |G| <= 32
// (exhaustive ones are practical up to about 20) and throw CapacityError past that.

struct ScanOptions {
  /// Enumerate only pairs with 0 in A and 0 in B, and A minimal in its orbit under
  /// translations and a sample of automorphisms. Every checked property is invariant
  /// under these maps, so coverage stays exhaustive.
  bool reduce_by_symmetry = true;
  std::size_t automorphism_limit = 48;
};

/// A pair (A, B) as subset literals.
struct PairWitness {
  std::string a, b;
};

struct KneserScanReport {
  std::string group;
  std::uint64_t pairs = 0;               // pairs examined (after reduction)
  std::uint64_t small_pairs = 0;         // |A+B| < |A|+|B|
  std::uint64_t trivial_small = 0;       // ... with trivial stabilizer
  std::uint64_t strict_small_pairs = 0;  // |A+B| <= |A|+|B|-2
  std::uint64_t strict_trivial = 0;      // ... with trivial stabilizer (contradicts Kneser)
  std::uint64_t periodicity_violations = 0;
  std::uint64_t inequality_violations = 0;
  std::optional<PairWitness> first_trivial_small;
  std::optional<PairWitness> first_inequality_violation;
};
KneserScanReport kneser_exhaustive(const FiniteAbelianGroup& g, ScanOptions options = {});
KneserScanReport kneser_random(const FiniteAbelianGroup& g, std::uint64_t pairs, std::uint64_t seed);

struct PigeonholeScanReport {
  std::string group;
  std::uint64_t pairs = 0;
  std::uint64_t forced_pairs = 0;
  std::uint64_t violations = 0;
  std::optional<PairWitness> first_violation;
};
PigeonholeScanReport pigeonhole_exhaustive(const FiniteAbelianGroup& g, ScanOptions options = {});

struct SteinhausScanReport {
  std::string group;
  std::uint64_t pairs = 0;
  std::uint64_t mismatches = 0;
  std::optional<PairWitness> first_mismatch;
};
/// Every pair of nonempty subsets; level set from precomputed spectra, sumset by bit DP.
SteinhausScanReport steinhaus_exhaustive(const FiniteAbelianGroup& g);
/// Random nonempty pairs through the public steinhaus_level_set / sumset operations.
SteinhausScanReport steinhaus_random(const FiniteAbelianGroup& g, std::uint64_t pairs, std::uint64_t seed);

}  // namespace sumset
