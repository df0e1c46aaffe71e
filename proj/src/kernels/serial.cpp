#include "sumsetlab/error.hpp"
#include "sumsetlab/kernels.hpp"

namespace sumset::kernels::serial {

void dft_naive(const FiniteAbelianGroup& g, std::span<const cplx> in, std::span<cplx> out, int sign) {
  const std::size_t n = g.size();
  if (in.size() != n || out.size() != n) throw StructuralError("dft_naive: length does not match group size");
  const std::uint64_t e = g.exponent();
  for (std::size_t chi = 0; chi < n; ++chi) {
    cplx acc{};
    for (std::size_t x = 0; x < n; ++x) {
      const std::uint64_t phase = g.char_phase(chi, x);
      acc += in[x] * g.root_of_unity(sign < 0 ? (e - phase) % e : phase);
    }
    out[chi] = acc;
  }
}

std::vector<cplx> convolve_direct(const FiniteAbelianGroup& g, std::span<const cplx> f, std::span<const cplx> h) {
  const std::size_t n = g.size();
  if (f.size() != n || h.size() != n) throw StructuralError("convolve_direct: length does not match group size");
  std::vector<cplx> out(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t x = 0; x < n; ++x) {
    cplx acc{};
    for (std::size_t t = 0; t < n; ++t) acc += f[t] * h[g.sub_index(x, t)];
    out[x] = acc * scale;
  }
  return out;
}

Bitset sumset(const FiniteAbelianGroup& g, const Bitset& a, const Bitset& b) {
  Bitset out(g.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.test(i)) continue;
    const GroupElement x = g.element(i);
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b.test(j)) out.set(g.index_of(g.add(x, g.element(j))));
  }
  return out;
}

Bitset integer_sumset(const Bitset& a, const Bitset& b, std::size_t out_bits) {
  Bitset out(out_bits);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.test(i)) continue;
    for (std::size_t j = 0; j < b.size() && i + j < out_bits; ++j)
      if (b.test(j)) out.set(i + j);
  }
  return out;
}

WindowMax sliding_window_max(const Bitset& bits, std::size_t length) {
  if (length == 0 || length > bits.size()) return {};
  WindowMax best{};
  bool first = true;
  for (std::size_t t = 0; t + length <= bits.size(); ++t) {
    std::size_t c = 0;
    for (std::size_t i = t; i < t + length; ++i) c += bits.test(i);
    if (first || c > best.count) {
      best = {c, t};
      first = false;
    }
  }
  return best;
}

Run longest_run(const Bitset& bits, std::size_t first, std::size_t last) {
  Run best;
  std::size_t cur = 0;
  for (std::size_t i = first; i < last && i < bits.size(); ++i) {
    cur = bits.test(i) ? cur + 1 : 0;
    if (cur > best.length) best = {cur, i + 1 - cur};
  }
  return best;
}

}  // namespace sumset::kernels::serial
