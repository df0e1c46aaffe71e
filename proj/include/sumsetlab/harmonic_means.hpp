#pragma once

// Fourier analysis on Z through finite means: mean Fourier coefficients, Weyl sums
// along integer sequences, trigonometric reconstruction from coefficients, and the
// radial truncation operator.
//
// Every limit is replaced by a depth-N value plus the distance to the depth-N/2
// value, reported as `delta`.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumsetlab/density_means.hpp"
#include "sumsetlab/floors.hpp"

namespace sumset {

/// Character x -> exp(2 pi i theta x) of Z, theta in [0, 1). Either an exact
/// rational j/q or a double; both reduce theta * x mod 1 exactly before the exponential.
class Frequency {
 public:
  Frequency() = default;
  static Frequency rational(std::int64_t j, std::int64_t q);
  static Frequency real(double theta);
  /// "j/q" gives a rational; a decimal gives a real.
  static Frequency parse(std::string_view text);

  bool exact() const noexcept { return den_ > 0; }
  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept;
  bool trivial() const noexcept { return exact() ? num_ == 0 : theta_ == 0; }
  /// The conjugate character, theta -> -theta mod 1.
  Frequency conj() const;
  /// theta * x mod 1, in [0, 1).
  long double phase(std::int64_t x) const;
  std::complex<double> operator()(std::int64_t x) const;
  std::string text() const;
  friend bool operator==(const Frequency&, const Frequency&) = default;

 private:
  std::int64_t num_ = 0, den_ = 1;  // den_ == 0 marks a real frequency
  double theta_ = 0;                // real case: theta = theta_, or -theta_ when neg_
  bool neg_ = false;
};

/// Bounded function on Z with a printable description and a known sup bound.
///   indicator(R)    indicator of a set rule
///   const(re) | const(re, im)
///   char(theta)     exp(2 pi i theta x)
///   sum(F, G, ...)  | scale(c, F) | truncate(F, alpha)
class FunctionRule {
 public:
  using Eval = std::function<std::complex<double>(std::int64_t)>;

  FunctionRule(std::string text, Eval eval, double sup_bound);
  static FunctionRule parse(std::string_view text);
  static FunctionRule indicator(const SetRule& rule);
  static FunctionRule constant(std::complex<double> c);
  static FunctionRule character(const Frequency& theta);

  std::complex<double> operator()(std::int64_t x) const { return eval_(x); }
  const std::string& text() const noexcept { return text_; }
  double sup_bound() const noexcept { return sup_; }

 private:
  std::string text_;
  Eval eval_;
  double sup_;
};

/// psi_alpha(z): z when |z| < alpha, alpha z / |z| otherwise. 1-Lipschitz.
std::complex<double> truncate_value(std::complex<double> z, double alpha);
/// Pointwise psi_alpha composed with f. Throws DomainError for alpha <= 0.
FunctionRule truncate(const FunctionRule& f, double alpha);

/// Integer sequences a_1, a_2, ...:
///   identity                a_n = n
///   pow(c)                  floor(n^c), c > 0 not an integer
///   poly(c0, c1, ..., ck)   floor(c0 + c1 n + ... + ck n^k)
///   logpow(c)               floor(exp((log n)^c))
///   custom(R)               n-th positive element of the set rule R
class HartmanSequence {
 public:
  enum class Kind { identity, power, polynomial, log_power, custom };

  static HartmanSequence identity();
  static HartmanSequence parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  std::string text() const;
  /// a_n for n >= 1. Throws CapacityError naming n when a_n leaves int64.
  std::int64_t term(std::uint64_t n) const;
  /// a_1 .. a_count.
  std::vector<std::int64_t> generate(std::uint64_t count) const;

 private:
  Kind kind_ = Kind::identity;
  ExactReal c_;
  std::vector<ExactReal> coeffs_;
  std::optional<SetRule> rule_;
};

/// Uniform average over F_N of a Folner family, or over a_1 .. a_N of a sequence.
struct MeanApproximator {
  enum class Kind { folner, hartman };
  Kind kind = Kind::folner;
  FolnerFamily family;
  std::optional<HartmanSequence> sequence;
  std::uint64_t depth = 1;

  static MeanApproximator folner(const FolnerFamily& fam, std::uint64_t depth);
  static MeanApproximator hartman(const HartmanSequence& seq, std::uint64_t depth);
  std::string text() const;
  /// Number of sample points at depth n.
  std::uint64_t support_size(std::uint64_t n) const;
};

struct Estimate {
  std::complex<double> value;
  double delta = 0;  // |value at depth N - value at depth N/2|
};

/// (1/|S|) sum over the sample S of g(x), at depth n.
std::complex<double> approximate_mean(const MeanApproximator& m, std::uint64_t n,
                                      const std::function<std::complex<double>(std::int64_t)>& g);

/// Average of f(x) exp(-2 pi i theta x) over the approximator's sample.
Estimate mean_fourier_coefficient(const FunctionRule& f, const MeanApproximator& m, const Frequency& theta);

/// (1/N) sum_{n <= N} exp(2 pi i theta a_n). Exactly 1 at theta = 0.
std::complex<double> weyl_average(const HartmanSequence& seq, const Frequency& theta, std::uint64_t n);

struct BRNApproximation {
  std::vector<Frequency> frequencies;
  std::vector<std::complex<double>> coefficients;
  std::vector<double> deltas;
  double mean_square = 0;       // m(|f|^2)
  double bessel_residual = 0;   // m(|f|^2) - sum |coeff|^2
  double bessel_slack = 0;      // tolerance + 10 * largest delta
  bool bessel_ok = true;        // residual >= -slack

  /// sum_j coeff_j exp(2 pi i theta_j x).
  std::complex<double> evaluate(std::int64_t x) const;
};

/// Throws DomainError on repeated frequencies.
BRNApproximation brn_reconstruct(const FunctionRule& f, const MeanApproximator& m, const std::vector<Frequency>& freqs,
                                 double tolerance = 1e-9);

/// Frequencies j/q for j = 0 .. q-1.
std::vector<Frequency> rational_grid(std::int64_t q);

struct ExpansionReport {
  std::vector<Frequency> frequencies;
  std::vector<std::complex<double>> f_coefficients, g_coefficients;
  double level = 0;               // delta: the level set is {Re h >= level}
  Interval window;
  std::uint64_t level_count = 0;  // |{Re h >= level} cap window|
  std::uint64_t defect_count = 0; // ... minus A + B
  double defect_density = 0;      // defect_count / |window|

  /// h(x) = sum_j fhat(theta_j) ghat(theta_j) exp(2 pi i theta_j x).
  std::complex<double> h(std::int64_t x) const;
};

/// h from the coefficients of 1_A under nu and 1_B under eta, then counts the part of
/// {Re h >= level} on `window` outside A + B. A + B on the window is built from the
/// elements of B within `reach` of 0, so it can only be undercounted and the defect
/// can only be overstated.
ExpansionReport convolution_expansion_on_Z(const SetRule& a, const SetRule& b, const MeanApproximator& nu,
                                           const MeanApproximator& eta, const std::vector<Frequency>& freqs,
                                           double level, Interval window, std::int64_t reach = 256);

}  // namespace sumset
