#pragma once

// Certified floors of real-valued sequence terms.
//
// Each floor first tries long double with an explicit error bound. Terms that land
// too close to an integer are settled exactly with GMP when the exponent is a
// rational with a small numerator, otherwise with MPFR at 128, 256, ..., 2048 bits.
// If even that cannot separate the value from an integer, PrecisionError is thrown.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sumset {

/// A decimal or fraction literal ("2.5", "-0.125", "5/2") kept exactly as num/den.
struct ExactReal {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0, lowest terms

  static ExactReal parse(std::string_view text);
  static ExactReal integer(std::int64_t v) { return ExactReal{v, 1}; }
  long double value() const noexcept { return static_cast<long double>(num) / static_cast<long double>(den); }
  /// Shortest exact text: "5/2" style for non-integers whose denominator is not a power of 10, else decimal.
  std::string text() const;
  friend bool operator==(const ExactReal&, const ExactReal&) = default;
};

/// floor(n^c) for n >= 1, c > 0. Throws CapacityError when the value reaches 2^63.
std::int64_t floor_pow(std::uint64_t n, const ExactReal& c);

/// floor(exp((log n)^c)) for n >= 1, c > 0. n = 1 gives 1.
std::int64_t floor_exp_log_pow(std::uint64_t n, const ExactReal& c);

/// floor(c_0 + c_1 n + ... + c_k n^k), exact. Throws CapacityError outside int64.
std::int64_t floor_poly(std::int64_t n, const std::vector<ExactReal>& coefficients);

/// How many terms needed an exact or high-precision fallback (diagnostics, per thread).
struct FloorStats {
  std::uint64_t fast = 0, exact_root = 0, mpfr = 0;
};
FloorStats& floor_stats();

}  // namespace sumset
