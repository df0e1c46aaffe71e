#pragma once

// Finite abelian groups presented as products Z_{n_1} x ... x Z_{n_k}.
//
// Elements and characters share the residue-tuple shape (finite abelian groups are
// self-dual). Both are linearized by the little-endian mixed-radix encoding
//   index = c_0 + n_0 * (c_1 + n_1 * (c_2 + ...)),
// which fixes every I/O ordering in the library.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumsetlab/bitset.hpp"

namespace sumset {

struct GroupElement {
  std::vector<std::uint32_t> coords;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct CharacterIndex {
  std::vector<std::uint32_t> coords;
  friend bool operator==(const CharacterIndex&, const CharacterIndex&) = default;
};

class FiniteAbelianGroup {
 public:
  /// Throws DomainError for an empty order list or a zero order.
  explicit FiniteAbelianGroup(std::vector<std::uint32_t> orders);

  /// Parses "Z4", "Z2xZ3xZ5" (case-insensitive 'x', optional spaces).
  static FiniteAbelianGroup parse(std::string_view literal);
  std::string literal() const;

  std::span<const std::uint32_t> orders() const noexcept { return orders_; }
  std::size_t rank() const noexcept { return orders_.size(); }
  std::size_t size() const noexcept { return size_; }
  /// Least common multiple of the cyclic orders; every character value is an exponent()-th root of unity.
  std::uint64_t exponent() const noexcept { return exponent_; }

  GroupElement element(std::size_t index) const;
  CharacterIndex character(std::size_t index) const;
  std::size_t index_of(const GroupElement& x) const;
  std::size_t index_of(const CharacterIndex& chi) const;
  GroupElement identity() const { return GroupElement{std::vector<std::uint32_t>(rank(), 0)}; }

  GroupElement add(const GroupElement& x, const GroupElement& y) const;
  GroupElement negate(const GroupElement& x) const;

  // Index-level arithmetic; arguments must already be valid indices.
  std::size_t add_index(std::size_t a, std::size_t b) const noexcept;
  std::size_t neg_index(std::size_t a) const noexcept;
  std::size_t sub_index(std::size_t a, std::size_t b) const noexcept { return add_index(a, neg_index(b)); }
  std::uint64_t element_order(std::size_t a) const noexcept;

  std::complex<double> char_eval(const CharacterIndex& chi, const GroupElement& x) const;
  /// chi(x) = exp(2 pi i * char_phase(chi, x) / exponent()).
  std::uint64_t char_phase(std::size_t chi, std::size_t x) const noexcept;
  std::complex<double> char_eval_index(std::size_t chi, std::size_t x) const noexcept;
  /// exp(2 pi i k / exponent()) for k in [0, exponent()).
  std::complex<double> root_of_unity(std::uint64_t k) const noexcept;

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a.orders_ == b.orders_; }

 private:
  void check_shape(std::span<const std::uint32_t> coords, const char* what) const;

  std::vector<std::uint32_t> orders_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
  std::uint64_t exponent_ = 1;
  std::shared_ptr<const std::vector<std::complex<double>>> roots_;
};

/// Element literal "(a,b,c)"; rank-1 groups also accept a bare integer. Coordinates are reduced.
GroupElement parse_element(const FiniteAbelianGroup& g, std::string_view literal);
std::string format_element(const GroupElement& x);

class Subgroup {
 public:
  /// Subgroup generated by the given element indices.
  Subgroup(const FiniteAbelianGroup& g, std::vector<std::size_t> generators);

  const FiniteAbelianGroup& group() const noexcept { return group_; }
  std::span<const std::size_t> generators() const noexcept { return generators_; }
  /// Sorted element indices.
  std::span<const std::size_t> elements() const noexcept { return elements_; }
  const Bitset& members() const noexcept { return members_; }
  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t index() const noexcept { return group_.size() / elements_.size(); }
  bool contains(std::size_t x) const noexcept { return members_.test(x); }
  bool is_trivial() const noexcept { return elements_.size() == 1; }

  /// Smallest element index of the coset x + H.
  std::size_t coset_representative(std::size_t x) const;
  /// Sorted element indices of x + H.
  std::vector<std::size_t> coset(std::size_t x) const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.group_ == b.group_ && a.members_ == b.members_;
  }

 private:
  Subgroup(const FiniteAbelianGroup& g, Bitset members);
  friend Subgroup subgroup_from_closed_set(const FiniteAbelianGroup&, Bitset);
  friend Subgroup stabilizer(const FiniteAbelianGroup&, const Bitset&);

  FiniteAbelianGroup group_;
  std::vector<std::size_t> generators_;
  std::vector<std::size_t> elements_;
  Bitset members_;
};

/// Wraps a set already known to be a subgroup; verifies closure and throws DomainError otherwise.
Subgroup subgroup_from_closed_set(const FiniteAbelianGroup& g, Bitset members);

struct SubgroupEnumerationLimits {
  std::size_t max_group_size = 4096;
  std::size_t max_subgroups = 65536;
};

/// Every subgroup, sorted by (order, element list). Throws CapacityError past either limit.
std::vector<Subgroup> enumerate_subgroups(const FiniteAbelianGroup& g, SubgroupEnumerationLimits limits = {});

/// {h : s + h = s}. Throws DomainError for an empty set.
Subgroup stabilizer(const FiniteAbelianGroup& g, const Bitset& s);
Subgroup stabilizer(const FiniteAbelianGroup& g, std::span<const std::size_t> s);

/// Up to `limit` automorphisms as index permutations (perm[x] = phi(x)), identity first.
/// Enumeration order is deterministic: images of the standard generators in lexicographic order.
std::vector<std::vector<std::uint32_t>> automorphisms(const FiniteAbelianGroup& g, std::size_t limit);

/// One representative per isomorphism class of abelian groups of order n, as invariant
/// factors d_1 | d_2 | ... (so Z2xZ6, never Z6xZ2). Sorted by factor count, then lexicographically.
std::vector<FiniteAbelianGroup> abelian_groups_of_order(std::uint32_t n);

}  // namespace sumset
