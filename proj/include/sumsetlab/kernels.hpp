#pragma once

// Data-parallel inner loops. Every kernel in `parallel` has a counterpart in `serial`
// that follows the defining formula directly; tests compare the two and the
// benchmark target times them against each other.
//
// Floating-point reductions use fixed-size chunks summed in chunk order, so results
// are bit-identical for any thread count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include "sumsetlab/abelian_core.hpp"
#include "sumsetlab/bitset.hpp"

namespace sumset::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t kChunk = 4096;

/// Caps the OpenMP worker count (n <= 0 restores the runtime default).
void set_threads(int n);
int max_threads();

/// Mixed-radix plan for a length-n DFT. Prime radices use the O(p^2) butterfly,
/// so a prime length degenerates to the naive transform.
class Dft1dPlan {
 public:
  explicit Dft1dPlan(std::size_t n);
  std::size_t size() const noexcept { return n_; }
  /// out[k] = sum_j in[j] * exp(sign * 2 pi i j k / n), sign = -1 or +1. `in` and `out` must not alias.
  void execute(const cplx* in, cplx* out, int sign) const;

 private:
  void work(cplx* out, const cplx* in, std::size_t fstride, std::size_t depth, const cplx* tw) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<cplx> tw_forward_;
  std::vector<cplx> tw_backward_;
};

/// Per-axis plans for one group, for callers running many small transforms.
/// execute() is single-threaded and reuses internal scratch, so one plan per thread.
class AxesPlan {
 public:
  explicit AxesPlan(const FiniteAbelianGroup& g);
  /// Same result as parallel::dft_axes.
  void execute(std::span<cplx> data, int sign);

 private:
  std::vector<std::uint32_t> orders_;
  std::vector<Dft1dPlan> plans_;
  std::vector<cplx> in_, out_;
};

struct WindowMax {
  std::size_t count = 0;   // largest |A cap [t, t+L)|
  std::size_t offset = 0;  // smallest t attaining it
};

struct Run {
  std::size_t length = 0;
  std::size_t start = 0;  // first position of the earliest longest run
};

namespace parallel {

/// Unnormalized multi-axis DFT in place over the group's mixed-radix layout.
void dft_axes(const FiniteAbelianGroup& g, std::span<cplx> data, int sign);

/// Group sumset {a + b} as a membership bitset.
Bitset sumset(const FiniteAbelianGroup& g, const Bitset& a, const Bitset& b);

/// Sumset of nonnegative integer sets: out bit i+j for a bit i, b bit j, truncated to out_bits.
Bitset integer_sumset(const Bitset& a, const Bitset& b, std::size_t out_bits);

/// Max over t in [0, size-L] of the popcount of bits[t, t+L).
WindowMax sliding_window_max(const Bitset& bits, std::size_t length);

/// Longest run of set bits inside [first, last).
Run longest_run(const Bitset& bits, std::size_t first, std::size_t last);

/// sum_{i<n} f(i) with chunked, order-fixed reduction. An exception from f is
/// rethrown after the loop; the one from the earliest chunk wins.
template <class F>
cplx chunked_sum(std::size_t n, F&& f) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<cplx> partial(chunks);
  std::vector<std::exception_ptr> errors(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    try {
      cplx s{};
      for (std::size_t i = lo; i < hi; ++i) s += f(i);
      partial[static_cast<std::size_t>(c)] = s;
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  cplx total{};
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace parallel

namespace serial {

/// out[chi] = sum_x in[x] * chi(x)^sign directly from character values (O(|G|^2)).
void dft_naive(const FiniteAbelianGroup& g, std::span<const cplx> in, std::span<cplx> out, int sign);

/// (1/|G|) sum_t f(t) h(x - t) for every x (O(|G|^2)).
std::vector<cplx> convolve_direct(const FiniteAbelianGroup& g, std::span<const cplx> f, std::span<const cplx> h);

/// {a + b} by coordinate arithmetic on GroupElement tuples.
Bitset sumset(const FiniteAbelianGroup& g, const Bitset& a, const Bitset& b);

Bitset integer_sumset(const Bitset& a, const Bitset& b, std::size_t out_bits);

/// Recounts every window from scratch.
WindowMax sliding_window_max(const Bitset& bits, std::size_t length);

/// Bit-by-bit scan.
Run longest_run(const Bitset& bits, std::size_t first, std::size_t last);

template <class F>
cplx plain_sum(std::size_t n, F&& f) {
  cplx s{};
  for (std::size_t i = 0; i < n; ++i) s += f(i);
  return s;
}

}  // namespace serial

}  // namespace sumset::kernels
