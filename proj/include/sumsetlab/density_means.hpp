#pragma once

// Subsets of Z seen through finite windows, with density estimates and
// thick / syndetic / piecewise-syndetic tests. Every answer holds at a stated
// scale; nothing here claims an asymptotic property outright.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumsetlab/bitset.hpp"

namespace sumset {

/// Window materialization cap in bits: 2^28, or SUMSETLAB_CAP_BITS from the environment.
std::size_t window_cap_bits();

/// Membership predicate on Z, parsed from a small rule language:
///   all | empty | even | odd | mod(q, r1, r2, ...) | squares | signed_squares
///   floor_pow(c) | floor_pow(n, c)      image of n -> floor(n^c), n >= 1
///   dyadic_runs                         union over k >= 1 of [2^k, 2^k + k]
///   union_intervals([a,b], [c,d], ...)  inclusive intervals
///   random(p, seed)                     hash-based, deterministic
///   bitmask(path) | bitmask(path, lo)   '0'/'1' characters, first one at lo (default 0)
///   not(R) | union(R, S, ...) | intersect(R, S, ...) | shift(R, t)   (shift gives R + t)
class SetRule {
 public:
  struct Node;

  static SetRule parse(std::string_view text);
  /// Canonical text; parse(text()) gives the same rule.
  const std::string& text() const noexcept { return text_; }
  bool contains(std::int64_t x) const;
  /// out[i] = contains(lo + i) for i < out.size().
  void fill(std::int64_t lo, Bitset& out) const;
  /// |R cap [lo, hi]| streamed in bounded chunks.
  std::uint64_t count(std::int64_t lo, std::int64_t hi) const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

class WindowSet {
 public:
  /// members.size() must equal hi - lo + 1.
  WindowSet(std::int64_t lo, std::int64_t hi, Bitset members);
  /// Throws CapacityError when hi - lo + 1 exceeds window_cap_bits().
  static WindowSet from_rule(const SetRule& rule, std::int64_t lo, std::int64_t hi);
  static WindowSet from_elements(std::int64_t lo, std::int64_t hi, const std::vector<std::int64_t>& xs);

  std::int64_t lo() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return hi_; }
  std::size_t length() const noexcept { return members_.size(); }
  const Bitset& members() const noexcept { return members_; }
  const std::optional<SetRule>& rule() const noexcept { return rule_; }

  bool covers(std::int64_t a, std::int64_t b) const noexcept { return lo_ <= a && b <= hi_; }
  /// Throws DomainError outside the window.
  bool contains(std::int64_t x) const;
  /// |A cap [a, b]|, inside the window.
  std::size_t count(std::int64_t a, std::int64_t b) const;
  std::size_t cardinality() const noexcept { return members_.count(); }
  /// A + t on the window [lo + t, hi + t].
  WindowSet translate(std::int64_t t) const;
  /// Elements in increasing order.
  std::vector<std::int64_t> elements() const;

 private:
  std::int64_t lo_, hi_;
  Bitset members_;
  std::optional<SetRule> rule_;
};

struct Interval {
  std::int64_t lo = 0, hi = 0;  // inclusive
  std::uint64_t size() const noexcept { return static_cast<std::uint64_t>(hi - lo + 1); }
};

/// Interval Folner families with |F_n| >= n.
struct FolnerFamily {
  enum class Kind { centered, initial, shifted };
  Kind kind = Kind::centered;
  std::int64_t offset = 0;

  /// centered: [-n, n]; initial: [1, n]; shifted(t): [t, t + n - 1].
  Interval window(std::uint64_t n) const;
  /// "centered" | "initial" | "shifted(t)".
  static FolnerFamily parse(std::string_view text);
  std::string text() const;
};

enum class DensityKind { lower, upper, banach_upper };

struct DensityEstimate {
  double value = 0;
  DensityKind kind = DensityKind::upper;
  std::uint64_t count = 0;      // |A cap window|
  std::uint64_t size = 0;       // |window|
  std::int64_t witness = 0;     // depth k (Folner) or translate t (Banach)
  Interval window;              // the window attaining the value
};

struct FolnerDensities {
  DensityEstimate lower, upper;
};

/// Running inf / sup of |A cap F_k| / |F_k| over k in [max(1, n/2), n]. Windows outside
/// a's range are streamed from its rule; without a rule that is a CapacityError.
FolnerDensities folner_density(const WindowSet& a, const FolnerFamily& fam, std::uint64_t n);

/// max over t in [lo, hi - L + 1] of |A cap [t, t + L)| / L, smallest t on ties.
DensityEstimate banach_upper_density(const WindowSet& a, std::uint64_t window_len, Interval search);

struct ThickReport {
  bool thick_at_scale = false;  // some [t, t + L) inside A
  std::int64_t witness = 0;     // smallest such t
  std::uint64_t max_run = 0;
  std::int64_t max_run_start = 0;
};
ThickReport classify_thick(const WindowSet& a, std::uint64_t probe_len);

struct SyndeticReport {
  bool determinate = false;     // at least two elements in the window
  bool syndetic_at_scale = false;
  std::uint64_t max_gap = 0;    // largest difference of consecutive elements
  std::int64_t gap_from = 0, gap_to = 0;  // consecutive elements realizing it
};
SyndeticReport classify_syndetic(const WindowSet& a, std::uint64_t gap_bound);

struct PiecewiseSyndeticReport {
  bool piecewise_syndetic_at_scale = false;  // [t, t + L) inside A + [0, g]
  std::int64_t witness = 0;
  std::uint64_t gap = 0, run = 0;
  std::uint64_t max_run = 0;  // longest run of A + [0, g] on the reliable part of the window
};
/// A + [0, g] is only known on [lo + g, hi]; the search stays there.
PiecewiseSyndeticReport classify_piecewise_syndetic(const WindowSet& a, std::uint64_t gap, std::uint64_t run);

struct EmbeddingOptions {
  std::uint64_t exhaustive_cap = 100000;  // enumerate all k-subsets up to this many probes
  std::uint64_t samples = 2000;           // otherwise sample this many, if allowed
  bool allow_sampling = true;
  std::uint64_t seed = 1;
  bool stop_on_failure = true;            // otherwise check every probe and tally failures
};

struct ProbeWitness {
  std::vector<std::int64_t> probe;
  std::int64_t translate = 0;
};

struct EmbeddingReport {
  bool embeds = true;
  bool exhaustive = false;
  std::uint64_t probes = 0;
  std::vector<ProbeWitness> witnesses;  // one per successful probe, in probe order
  std::optional<std::vector<std::int64_t>> failing_probe;  // the first failure
  std::uint64_t failures = 0;
  std::vector<std::vector<std::int64_t>> failing_probes;  // the first few failures
};

/// For k-element probes F inside A's window, looks for t with F + t inside B's window and B.
/// Translates are tried at 0 first, then in increasing order. Throws CapacityError when
/// exhaustive enumeration exceeds its cap and sampling is off.
EmbeddingReport finite_embeddability(const WindowSet& a, const WindowSet& b, std::size_t k,
                                     const EmbeddingOptions& options = {});

struct MeanEstimate {
  std::complex<double> value;  // lambda_n(f)
  double oscillation = 0;      // max of (real spread, imaginary spread) of lambda_k over k in [n/2, n]
};

/// Folner averages lambda_k(f) = (1/|F_k|) sum over F_k of f.
MeanEstimate mean_from_family(const FolnerFamily& fam, const std::function<std::complex<double>(std::int64_t)>& f,
                              std::uint64_t n);

}  // namespace sumset
