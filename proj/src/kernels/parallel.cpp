#include <algorithm>
#include <numbers>

#include "sumsetlab/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sumset::kernels {

void set_threads(int n) {
#ifdef _OPENMP
  static const int default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : default_threads);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Dft1dPlan::Dft1dPlan(std::size_t n) : n_(n), tw_forward_(n), tw_backward_(n) {
  std::size_t m = n;
  for (std::size_t p = 2; p * p <= m; ++p)
    while (m % p == 0) {
      factors_.push_back(p);
      m /= p;
    }
  if (m > 1 || factors_.empty()) factors_.push_back(m);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    tw_forward_[k] = {std::cos(angle), -std::sin(angle)};
    tw_backward_[k] = std::conj(tw_forward_[k]);
  }
}

void Dft1dPlan::execute(const cplx* in, cplx* out, int sign) const {
  if (n_ == 1) {
    out[0] = in[0];
    return;
  }
  work(out, in, 1, 0, sign < 0 ? tw_forward_.data() : tw_backward_.data());
}

// Decimation in time: split by the radix p = factors_[depth], recurse on the p
// interleaved subsequences, then combine with a generic radix-p butterfly.
void Dft1dPlan::work(cplx* out, const cplx* in, std::size_t fstride, std::size_t depth, const cplx* tw) const {
  const std::size_t p = factors_[depth];
  const std::size_t m = n_ / (fstride * p);
  if (m == 1) {
    for (std::size_t q = 0; q < p; ++q) out[q] = in[q * fstride];
  } else {
    for (std::size_t q = 0; q < p; ++q) work(out + q * m, in + q * fstride, fstride * p, depth + 1, tw);
  }
  cplx scratch_small[16];
  std::vector<cplx> scratch_big;
  cplx* scratch = scratch_small;
  if (p > 16) {
    scratch_big.resize(p);
    scratch = scratch_big.data();
  }
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t q = 0; q < p; ++q) scratch[q] = out[u + q * m];
    for (std::size_t q1 = 0; q1 < p; ++q1) {
      const std::size_t k = u + q1 * m;
      const std::size_t step = (fstride * k) % n_;
      std::size_t twidx = 0;
      cplx acc = scratch[0];
      for (std::size_t q = 1; q < p; ++q) {
        twidx += step;
        if (twidx >= n_) twidx -= n_;
        acc += scratch[q] * tw[twidx];
      }
      out[k] = acc;
    }
  }
}

AxesPlan::AxesPlan(const FiniteAbelianGroup& g) : orders_(g.orders().begin(), g.orders().end()) {
  std::size_t widest = 1;
  for (auto n : orders_) {
    plans_.emplace_back(n);
    widest = std::max<std::size_t>(widest, n);
  }
  in_.resize(widest);
  out_.resize(widest);
}

void AxesPlan::execute(std::span<cplx> data, int sign) {
  std::size_t stride = 1;
  for (std::size_t axis = 0; axis < orders_.size(); ++axis) {
    const std::size_t n = orders_[axis];
    if (n > 1) {
      const std::size_t lines = data.size() / n;
      for (std::size_t t = 0; t < lines; ++t) {
        const std::size_t base = (t % stride) + (t / stride) * stride * n;
        for (std::size_t j = 0; j < n; ++j) in_[j] = data[base + j * stride];
        plans_[axis].execute(in_.data(), out_.data(), sign);
        for (std::size_t j = 0; j < n; ++j) data[base + j * stride] = out_[j];
      }
    }
    stride *= n;
  }
}

namespace parallel {

void dft_axes(const FiniteAbelianGroup& g, std::span<cplx> data, int sign) {
  std::size_t stride = 1;
  for (const auto n : g.orders()) {
    if (n > 1) {
      const Dft1dPlan plan(n);
      const std::size_t lines = g.size() / n;
#pragma omp parallel if (g.size() >= 4096)
      {
        std::vector<cplx> in(n), out(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(lines); ++t) {
          const std::size_t ut = static_cast<std::size_t>(t);
          const std::size_t base = (ut % stride) + (ut / stride) * stride * n;
          for (std::size_t j = 0; j < n; ++j) in[j] = data[base + j * stride];
          plan.execute(in.data(), out.data(), sign);
          for (std::size_t j = 0; j < n; ++j) data[base + j * stride] = out[j];
        }
      }
    }
    stride *= n;
  }
}

Bitset sumset(const FiniteAbelianGroup& g, const Bitset& a, const Bitset& b) {
  const auto as = a.indices();
  const auto bs = b.indices();
  Bitset out(g.size());
#pragma omp parallel
  {
    Bitset local(g.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(as.size()); ++i) {
      const std::size_t x = as[static_cast<std::size_t>(i)];
      for (auto y : bs) local.set(g.add_index(x, y));
    }
#pragma omp critical(sumset_merge)
    out |= local;
  }
  return out;
}

Bitset integer_sumset(const Bitset& a, const Bitset& b, std::size_t out_bits) {
  const auto as = a.indices();
  Bitset out(out_bits);
#pragma omp parallel
  {
    Bitset local(out_bits);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(as.size()); ++i)
      local.or_shifted_up(b, as[static_cast<std::size_t>(i)]);
#pragma omp critical(integer_sumset_merge)
    out |= local;
  }
  return out;
}

WindowMax sliding_window_max(const Bitset& bits, std::size_t length) {
  if (length == 0 || length > bits.size()) return {};
  const std::size_t positions = bits.size() - length + 1;
  const std::size_t chunks = (positions + kChunk - 1) / kChunk;
  std::vector<WindowMax> best(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(positions, lo + kChunk);
    std::size_t count = bits.count_range(lo, lo + length);
    WindowMax w{count, lo};
    for (std::size_t t = lo + 1; t < hi; ++t) {
      count += bits.test(t + length - 1);
      count -= bits.test(t - 1);
      if (count > w.count) w = {count, t};
    }
    best[static_cast<std::size_t>(c)] = w;
  }
  WindowMax out = best.front();
  for (const auto& w : best)
    if (w.count > out.count) out = w;
  return out;
}

namespace {

struct RunPiece {
  std::size_t prefix = 0, suffix = 0;
  Run best;
  bool all = false;
};

RunPiece scan_runs(const Bitset& bits, std::size_t lo, std::size_t hi) {
  RunPiece p;
  std::size_t cur = 0, i = lo;
  bool in_prefix = true;
  auto close = [&](std::size_t end) {
    if (in_prefix) {
      p.prefix = cur;
      in_prefix = false;
    }
    if (cur > p.best.length) p.best = {cur, end - cur};
    cur = 0;
  };
  const auto words = bits.words();
  while (i < hi) {
    if ((i & 63) == 0 && i + 64 <= hi) {
      const std::uint64_t w = words[i >> 6];
      if (w == ~std::uint64_t{0}) {
        cur += 64;
        i += 64;
        continue;
      }
      if (w == 0) {
        close(i);
        i += 64;
        continue;
      }
    }
    if (bits.test(i)) ++cur;
    else close(i);
    ++i;
  }
  if (in_prefix) {
    p.all = true;
    p.prefix = cur;
  }
  if (cur > p.best.length) p.best = {cur, hi - cur};
  p.suffix = cur;
  return p;
}

}  // namespace

Run longest_run(const Bitset& bits, std::size_t first, std::size_t last) {
  last = std::min(last, bits.size());
  if (first >= last) return {};
  constexpr std::size_t span = kChunk * 64;
  const std::size_t chunks = (last - first + span - 1) / span;
  std::vector<RunPiece> pieces(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = first + static_cast<std::size_t>(c) * span;
    pieces[static_cast<std::size_t>(c)] = scan_runs(bits, lo, std::min(last, lo + span));
  }
  Run best;
  std::size_t cur = 0, cur_start = first;
  for (std::size_t c = 0; c < chunks; ++c) {
    const auto& p = pieces[c];
    const std::size_t lo = first + c * span, hi = std::min(last, lo + span);
    if (cur == 0) cur_start = lo;
    if (p.all) {
      cur += hi - lo;
      continue;
    }
    if (cur + p.prefix > best.length) best = {cur + p.prefix, cur_start};
    if (p.best.length > best.length) best = p.best;
    cur = p.suffix;
    cur_start = hi - cur;
  }
  if (cur > best.length) best = {cur, cur_start};
  return best;
}

}  // namespace parallel

}  // namespace sumset::kernels
