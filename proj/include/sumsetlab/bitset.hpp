#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sumset {

/// Fixed-length bitset over 64-bit words. Bits past size() in the last word are kept zero.
class Bitset {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Bitset() = default;
  explicit Bitset(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const noexcept { return nbits_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool v) noexcept { v ? set(i) : reset(i); }

  void set_all() noexcept {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }
  void clear() noexcept {
    for (auto& w : words_) w = 0;
  }

  /// Sets bits [first, last).
  void set_range(std::size_t first, std::size_t last) noexcept {
    while (first < last && (first & 63) != 0) set(first++);
    while (first + 64 <= last) {
      words_[first >> 6] = ~std::uint64_t{0};
      first += 64;
    }
    while (first < last) set(first++);
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Population count of bits [first, last).
  std::size_t count_range(std::size_t first, std::size_t last) const noexcept {
    std::size_t c = 0;
    while (first < last && (first & 63) != 0) c += test(first++);
    while (first + 64 <= last) {
      c += static_cast<std::size_t>(std::popcount(words_[first >> 6]));
      first += 64;
    }
    while (first < last) c += test(first++);
    return c;
  }

  bool any() const noexcept {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const noexcept { return !any(); }
  bool all() const noexcept { return count() == nbits_; }

  /// Index of the first set bit at or after `from`, or npos.
  std::size_t find_next(std::size_t from) const noexcept {
    if (from >= nbits_) return npos;
    std::size_t wi = from >> 6;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (w) {
        std::size_t idx = (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
        return idx < nbits_ ? idx : npos;
      }
      if (++wi >= words_.size()) return npos;
      w = words_[wi];
    }
  }
  std::size_t find_first() const noexcept { return find_next(0); }

  /// Set bits in increasing order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t i = find_first(); i != npos; i = find_next(i + 1)) out.push_back(i);
    return out;
  }

  /// Bitwise OR of `other` shifted up by `shift` bits (bits leaving the top are dropped).
  void or_shifted_up(const Bitset& other, std::size_t shift) noexcept {
    const std::size_t ws = shift >> 6, bs = shift & 63;
    const std::size_t n = words_.size();
    const auto& src = other.words_;
    for (std::size_t i = ws; i < n; ++i) {
      const std::size_t s = i - ws;
      std::uint64_t v = s < src.size() ? src[s] << bs : 0;
      if (bs && s >= 1 && s - 1 < src.size()) v |= src[s - 1] >> (64 - bs);
      words_[i] |= v;
    }
    trim();
  }

  /// Bitwise OR of `other` shifted down by `shift` bits.
  void or_shifted_down(const Bitset& other, std::size_t shift) noexcept {
    const std::size_t ws = shift >> 6, bs = shift & 63;
    const auto& src = other.words_;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const std::size_t s = i + ws;
      if (s >= src.size()) break;
      std::uint64_t v = src[s] >> bs;
      if (bs && s + 1 < src.size()) v |= src[s + 1] << (64 - bs);
      words_[i] |= v;
    }
    trim();
  }

  Bitset& operator|=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size() && i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= i < o.words_.size() ? o.words_[i] : 0;
    return *this;
  }
  Bitset& operator^=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size() && i < o.words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  /// Clears every bit that is set in `o`.
  Bitset& subtract(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size() && i < o.words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  void flip() noexcept {
    for (auto& w : words_) w = ~w;
    trim();
  }

  bool is_subset_of(const Bitset& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~(i < o.words_.size() ? o.words_[i] : 0)) return false;
    return true;
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator^(Bitset a, const Bitset& b) { return a ^= b; }

 private:
  void trim() noexcept {
    if (nbits_ & 63) words_.back() &= (std::uint64_t{1} << (nbits_ & 63)) - 1;
  }

  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sumset
