#pragma once

// Block construction of a pair A, B in Z whose sumset has an invariant mean of 1/2
// along the blocks, with exact per-block checks of how A + B sits on each block.

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sumsetlab/bohr_structure.hpp"
#include "sumsetlab/density_means.hpp"
#include "sumsetlab/harmonic_means.hpp"

namespace sumset {

/// b_n = floor(ratio * a_n); a_{n+1} = step * n * b_n (step_grows) or step * b_n.
struct GrowthPolicy {
  std::int64_t ratio_num = 19, ratio_den = 10;
  std::int64_t step = 3;
  bool step_grows = true;

  /// "default" or "policy(ratio=1.9; next=3n)"; next=1 means a_{n+1} = b_n.
  static GrowthPolicy parse(std::string_view text);
  std::string text() const;
};

struct ExampleParameters {
  std::vector<std::int64_t> a, b;  // index 0 holds block 1
  std::size_t depth() const noexcept { return a.size(); }
};

/// Throws ConstructionError naming the first failing condition and its 1-based n:
///   "increasing"  a_n < b_n < a_{n+1}
///   "anplus1"     a_{n+1} > 2 b_n
///   "2an"         2 a_n > b_n
///   "bnplus1"     (b_{n+1} - a_{n+1}) / b_n strictly increasing
void validate_parameters(const ExampleParameters& p);

/// a_1 >= 2, depth >= 1. Overflow of int64 is a CapacityError.
ExampleParameters build_parameters(std::int64_t a1, const GrowthPolicy& policy, std::size_t depth);

struct ExampleBlock {
  std::int64_t n = 0;
  std::int64_t q = 0;  // floor((b_n - a_n) / 2)
  Interval I, J, F;
};

struct ExampleSets {
  ExampleParameters params;
  std::vector<ExampleBlock> blocks;
  WindowSet A, B;  // over [a_1, b_depth]

  const ExampleBlock& block(std::int64_t n) const;
};

ExampleSets build_sets(const ExampleParameters& params);

/// {x in [lo, hi] : x = parity mod 2}, stored by its first and last element.
struct ParityRun {
  std::int64_t first = 0, last = -1;
  bool empty() const noexcept { return first > last; }
};
ParityRun parity_run(Interval iv, int parity);

/// Pieces of A_n and B_n: (I_n even, J_n odd) and (F_n even).
std::vector<ParityRun> a_pieces(const ExampleBlock& blk);
ParityRun b_piece(const ExampleBlock& blk);

/// Sum of two parity runs with step 2: again a parity run.
ParityRun run_sum(ParityRun x, ParityRun y);

/// (A + B) cap F_n as a window over F_n. Only blocks m <= n can reach F_n; the bound
/// min A_{n+1} + min B > b_n is checked, not assumed.
WindowSet sumset_on_block(const ExampleSets& sets, std::int64_t n);

struct LocalizationReport {
  std::int64_t n = 0;
  std::uint64_t block_size = 0;        // |F_n|
  std::uint64_t sumset_count = 0;      // |(A+B) cap F_n|
  std::uint64_t sym_diff = 0;          // |((A+B) cap F_n) sym diff (A_n cap F_n)|
  double defect = 0;                   // sym_diff / |F_n|
  double sumset_density = 0;           // |(A+B) cap F_n| / |F_n|
  double a_density = 0;                // |A_n| / |F_n|
  double cross_coverage = 0;           // |(A_{<n} + B_n) cap F_n| / |F_n|
  double shifted_coverage = 0;         // |(A_n + B_{<n}) cap F_n| / |F_n|
  double i_even_share = 0;             // |(A+B) cap I_n cap 2Z| / |I_n|
  double j_odd_share = 0;              // |(A+B) cap J_n cap (2Z+1)| / |J_n|
};
LocalizationReport verify_sumset_localization(const ExampleSets& sets, std::int64_t n);

/// Finite sum of c_k e(theta_k x) with rational theta_k, written in the function-rule
/// syntax restricted to const | char | sum | scale.
class TrigPolynomial {
 public:
  struct Term {
    Frequency theta;
    std::complex<double> coeff;
  };

  /// Real frequencies are a DomainError: their mean is not exact.
  static TrigPolynomial parse(std::string_view text);
  const std::string& text() const noexcept { return text_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  /// Coefficient of the trivial frequency.
  std::complex<double> mean() const;
  std::complex<double> operator()(std::int64_t x) const;

 private:
  std::vector<Term> terms_;  // merged by frequency, sorted by (den, num)
  std::string text_;
};

struct ObstructionReport {
  std::int64_t n = 0;
  std::complex<double> lhs;  // (1/|F_n|) sum over F_n of phi 1_{A+B}
  std::complex<double> rhs;  // mean(phi) / 2
  double gap = 0;            // |lhs - rhs|
};
ObstructionReport verify_half_obstruction(const ExampleSets& sets, const TrigPolynomial& phi, std::int64_t n);

struct BlockReport {
  LocalizationReport localization;
  std::vector<ObstructionReport> obstruction;  // one per phi, in the given order
};

/// Every block, computed independently; the order of the result follows n.
std::vector<BlockReport> example_report(const ExampleSets& sets, const std::vector<TrigPolynomial>& phis);

struct BohrObstructionScan {
  std::int64_t n = 0;
  std::vector<BohrCandidate> candidates;  // rank 1 only, scan order
  double min_defect = 1;                  // over rank-1 candidates
};
/// piecewise_bohr_scan on (A + B) cap F_n.
BohrObstructionScan bohr_obstruction_scan(const ExampleSets& sets, std::int64_t n, const PiecewiseBohrOptions& options);

}  // namespace sumset
