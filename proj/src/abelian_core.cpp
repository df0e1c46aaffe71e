#include "sumsetlab/abelian_core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>

#include "sumsetlab/error.hpp"

namespace sumset {

namespace {

constexpr std::size_t kMaxGroupSize = std::size_t{1} << 40;
constexpr std::uint64_t kMaxRootTable = std::uint64_t{1} << 20;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

long long parse_integer(std::string_view s, const char* what) {
  s = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DomainError(std::string("invalid ") + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::uint32_t> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw DomainError("group needs at least one cyclic factor");
  strides_.reserve(orders_.size());
  for (auto n : orders_) {
    if (n == 0) throw DomainError("cyclic order must be >= 1");
    strides_.push_back(size_);
    if (size_ > kMaxGroupSize / n) throw CapacityError("group size exceeds 2^40");
    size_ *= n;
    exponent_ = std::lcm(exponent_, std::uint64_t{n});
  }
  if (exponent_ <= kMaxRootTable) {
    auto table = std::make_shared<std::vector<std::complex<double>>>(exponent_);
    for (std::uint64_t k = 0; k < exponent_; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(exponent_);
      (*table)[k] = {std::cos(angle), std::sin(angle)};
    }
    // Exact values at the quarter turns keep real characters real.
    (*table)[0] = {1.0, 0.0};
    if (exponent_ % 2 == 0) (*table)[exponent_ / 2] = {-1.0, 0.0};
    if (exponent_ % 4 == 0) {
      (*table)[exponent_ / 4] = {0.0, 1.0};
      (*table)[3 * exponent_ / 4] = {0.0, -1.0};
    }
    roots_ = std::move(table);
  }
}

FiniteAbelianGroup FiniteAbelianGroup::parse(std::string_view literal) {
  std::string_view s = trim(literal);
  if (s.empty()) throw DomainError("empty group literal");
  std::vector<std::uint32_t> orders;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = pos;
    while (next < s.size() && s[next] != 'x' && s[next] != 'X') ++next;
    std::string_view factor = trim(s.substr(pos, next - pos));
    if (factor.size() < 2 || (factor[0] != 'Z' && factor[0] != 'z'))
      throw DomainError("invalid group literal '" + std::string(literal) + "'");
    const long long n = parse_integer(factor.substr(1), "cyclic order");
    if (n < 1 || n > 0xffffffffLL) throw DomainError("cyclic order out of range in '" + std::string(literal) + "'");
    orders.push_back(static_cast<std::uint32_t>(n));
    if (next >= s.size()) break;
    pos = next + 1;
  }
  return FiniteAbelianGroup(std::move(orders));
}

std::string FiniteAbelianGroup::literal() const {
  std::string out;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    if (j) out += 'x';
    out += 'Z' + std::to_string(orders_[j]);
  }
  return out;
}

void FiniteAbelianGroup::check_shape(std::span<const std::uint32_t> coords, const char* what) const {
  if (coords.size() != orders_.size())
    throw StructuralError(std::string(what) + " has " + std::to_string(coords.size()) + " coordinates, group " +
                          literal() + " has rank " + std::to_string(orders_.size()));
  for (std::size_t j = 0; j < coords.size(); ++j)
    if (coords[j] >= orders_[j])
      throw StructuralError(std::string(what) + " coordinate " + std::to_string(j) + " not reduced mod " +
                            std::to_string(orders_[j]));
}

GroupElement FiniteAbelianGroup::element(std::size_t index) const {
  if (index >= size_) throw StructuralError("element index out of range for " + literal());
  GroupElement x{std::vector<std::uint32_t>(rank())};
  for (std::size_t j = 0; j < rank(); ++j) {
    x.coords[j] = static_cast<std::uint32_t>(index % orders_[j]);
    index /= orders_[j];
  }
  return x;
}

CharacterIndex FiniteAbelianGroup::character(std::size_t index) const { return CharacterIndex{element(index).coords}; }

std::size_t FiniteAbelianGroup::index_of(const GroupElement& x) const {
  check_shape(x.coords, "element");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < rank(); ++j) idx += x.coords[j] * strides_[j];
  return idx;
}

std::size_t FiniteAbelianGroup::index_of(const CharacterIndex& chi) const {
  check_shape(chi.coords, "character");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < rank(); ++j) idx += chi.coords[j] * strides_[j];
  return idx;
}

GroupElement FiniteAbelianGroup::add(const GroupElement& x, const GroupElement& y) const {
  check_shape(x.coords, "element");
  check_shape(y.coords, "element");
  GroupElement z{std::vector<std::uint32_t>(rank())};
  for (std::size_t j = 0; j < rank(); ++j)
    z.coords[j] = static_cast<std::uint32_t>((std::uint64_t{x.coords[j]} + y.coords[j]) % orders_[j]);
  return z;
}

GroupElement FiniteAbelianGroup::negate(const GroupElement& x) const {
  check_shape(x.coords, "element");
  GroupElement z{std::vector<std::uint32_t>(rank())};
  for (std::size_t j = 0; j < rank(); ++j) z.coords[j] = x.coords[j] == 0 ? 0 : orders_[j] - x.coords[j];
  return z;
}

std::size_t FiniteAbelianGroup::add_index(std::size_t a, std::size_t b) const noexcept {
  std::size_t out = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const std::size_t n = orders_[j];
    std::size_t d = a % n + b % n;
    if (d >= n) d -= n;
    out += d * strides_[j];
    a /= n;
    b /= n;
  }
  return out;
}

std::size_t FiniteAbelianGroup::neg_index(std::size_t a) const noexcept {
  std::size_t out = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const std::size_t n = orders_[j];
    const std::size_t d = a % n;
    out += (d == 0 ? 0 : n - d) * strides_[j];
    a /= n;
  }
  return out;
}

std::uint64_t FiniteAbelianGroup::element_order(std::size_t a) const noexcept {
  std::uint64_t ord = 1;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const std::uint64_t n = orders_[j];
    const std::uint64_t d = a % n;
    ord = std::lcm(ord, n / std::gcd(n, d));
    a /= n;
  }
  return ord;
}

std::uint64_t FiniteAbelianGroup::char_phase(std::size_t chi, std::size_t x) const noexcept {
  std::uint64_t phase = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const std::uint64_t n = orders_[j];
    const std::uint64_t c = chi % n, d = x % n;
    // c*d mod n scaled to the common denominator exponent_.
    const std::uint64_t term = static_cast<std::uint64_t>((static_cast<unsigned __int128>(c) * d) % n) * (exponent_ / n);
    phase = (phase + term) % exponent_;
    chi /= n;
    x /= n;
  }
  return phase;
}

std::complex<double> FiniteAbelianGroup::root_of_unity(std::uint64_t k) const noexcept {
  k %= exponent_;
  if (roots_) return (*roots_)[k];
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(exponent_);
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> FiniteAbelianGroup::char_eval_index(std::size_t chi, std::size_t x) const noexcept {
  return root_of_unity(char_phase(chi, x));
}

std::complex<double> FiniteAbelianGroup::char_eval(const CharacterIndex& chi, const GroupElement& x) const {
  return char_eval_index(index_of(chi), index_of(x));
}

GroupElement parse_element(const FiniteAbelianGroup& g, std::string_view literal) {
  std::string_view s = trim(literal);
  std::vector<long long> raw;
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw DomainError("unterminated element literal '" + std::string(literal) + "'");
    s = s.substr(1, s.size() - 2);
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = s.find(',', pos);
      raw.push_back(parse_integer(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos), "coordinate"));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  } else {
    raw.push_back(parse_integer(s, "element"));
  }
  if (raw.size() != g.rank())
    throw StructuralError("element literal '" + std::string(literal) + "' does not match rank of " + g.literal());
  GroupElement x{std::vector<std::uint32_t>(g.rank())};
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const long long n = g.orders()[j];
    x.coords[j] = static_cast<std::uint32_t>(((raw[j] % n) + n) % n);
  }
  return x;
}

std::string format_element(const GroupElement& x) {
  std::string out = "(";
  for (std::size_t j = 0; j < x.coords.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(x.coords[j]);
  }
  return out + ")";
}

namespace {

// H + <x> as a membership bitset, given H's member list.
Bitset join_cyclic(const FiniteAbelianGroup& g, const std::vector<std::size_t>& h_elems, std::size_t x) {
  Bitset out(g.size());
  std::size_t m = 0;
  do {
    for (auto h : h_elems) out.set(g.add_index(h, m));
    m = g.add_index(m, x);
  } while (m != 0);
  return out;
}

std::vector<std::size_t> minimal_generators(const FiniteAbelianGroup& g, const Bitset& members) {
  std::vector<std::size_t> gens;
  std::vector<std::size_t> current{0};
  Bitset have(g.size());
  have.set(0);
  for (std::size_t x = members.find_first(); x != Bitset::npos; x = members.find_next(x + 1)) {
    if (have.test(x)) continue;
    gens.push_back(x);
    have = join_cyclic(g, current, x);
    current = have.indices();
  }
  return gens;
}

}  // namespace

Subgroup::Subgroup(const FiniteAbelianGroup& g, std::vector<std::size_t> generators)
    : group_(g), generators_(std::move(generators)), members_(g.size()) {
  std::vector<std::size_t> current{0};
  members_.set(0);
  for (auto x : generators_) {
    if (x >= g.size()) throw StructuralError("generator index out of range for " + g.literal());
    if (members_.test(x)) continue;
    members_ = join_cyclic(g, current, x);
    current = members_.indices();
  }
  elements_ = members_.indices();
}

Subgroup::Subgroup(const FiniteAbelianGroup& g, Bitset members)
    : group_(g), generators_(minimal_generators(g, members)), elements_(members.indices()), members_(std::move(members)) {}

Subgroup subgroup_from_closed_set(const FiniteAbelianGroup& g, Bitset members) {
  if (members.size() != g.size()) throw StructuralError("member bitset does not match group size");
  if (!members.test(0)) throw DomainError("subgroup must contain the identity");
  const auto elems = members.indices();
  for (auto a : elems)
    for (auto b : elems)
      if (!members.test(g.sub_index(a, b))) throw DomainError("set is not closed under subtraction");
  return Subgroup(g, std::move(members));
}

std::size_t Subgroup::coset_representative(std::size_t x) const {
  std::size_t best = group_.size();
  for (auto h : elements_) best = std::min(best, group_.add_index(x, h));
  return best;
}

std::vector<std::size_t> Subgroup::coset(std::size_t x) const {
  std::vector<std::size_t> out;
  out.reserve(elements_.size());
  for (auto h : elements_) out.push_back(group_.add_index(x, h));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Subgroup> enumerate_subgroups(const FiniteAbelianGroup& g, SubgroupEnumerationLimits limits) {
  if (g.size() > limits.max_group_size)
    throw CapacityError("subgroup enumeration capped at |G| <= " + std::to_string(limits.max_group_size) + ", got " +
                        std::to_string(g.size()));
  std::map<std::vector<std::uint64_t>, Bitset> seen;
  std::queue<Bitset> work;
  Bitset trivial(g.size());
  trivial.set(0);
  seen.emplace(std::vector<std::uint64_t>(trivial.words().begin(), trivial.words().end()), trivial);
  work.push(trivial);
  while (!work.empty()) {
    Bitset h = std::move(work.front());
    work.pop();
    const auto elems = h.indices();
    Bitset done = h;  // H + <x> depends only on the coset x + H
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (done.test(x)) continue;
      for (auto e : elems) done.set(g.add_index(x, e));
      Bitset k = join_cyclic(g, elems, x);
      std::vector<std::uint64_t> key(k.words().begin(), k.words().end());
      if (seen.contains(key)) continue;
      if (seen.size() >= limits.max_subgroups)
        throw CapacityError("subgroup count exceeds cap " + std::to_string(limits.max_subgroups));
      seen.emplace(std::move(key), k);
      work.push(std::move(k));
    }
  }
  std::vector<Subgroup> out;
  out.reserve(seen.size());
  for (auto& [key, bits] : seen) out.push_back(subgroup_from_closed_set(g, bits));
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return std::lexicographical_compare(a.elements().begin(), a.elements().end(), b.elements().begin(),
                                        b.elements().end());
  });
  return out;
}

Subgroup stabilizer(const FiniteAbelianGroup& g, std::span<const std::size_t> s) {
  Bitset bits(g.size());
  for (auto x : s) {
    if (x >= g.size()) throw StructuralError("element index out of range for " + g.literal());
    bits.set(x);
  }
  return stabilizer(g, bits);
}

Subgroup stabilizer(const FiniteAbelianGroup& g, const Bitset& s) {
  if (s.size() != g.size()) throw StructuralError("set bitset does not match group size");
  const auto elems = s.indices();
  if (elems.empty()) throw DomainError("stabilizer of the empty set is undefined");
  Bitset members(g.size());
  const std::size_t s0 = elems.front();
  // s + h = s forces s0 + h in s, so h ranges over s - s0.
  for (auto y : elems) {
    const std::size_t h = g.sub_index(y, s0);
    bool ok = true;
    for (auto x : elems) {
      if (!s.test(g.add_index(x, h))) {
        ok = false;
        break;
      }
    }
    if (ok) members.set(h);
  }
  return Subgroup(g, std::move(members));
}

std::vector<std::vector<std::uint32_t>> automorphisms(const FiniteAbelianGroup& g, std::size_t limit) {
  std::vector<std::vector<std::uint32_t>> out;
  if (limit == 0) return out;
  const std::size_t n = g.size();
  std::vector<std::uint32_t> id(n);
  std::iota(id.begin(), id.end(), 0u);
  out.push_back(id);

  const std::size_t k = g.rank();
  std::vector<std::vector<std::size_t>> candidates(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t x = 0; x < n; ++x)
      if (g.orders()[j] % g.element_order(x) == 0) candidates[j].push_back(x);

  std::vector<std::size_t> pick(k, 0);
  std::vector<std::uint32_t> perm(n);
  Bitset hit(n);
  while (out.size() < limit) {
    // phi(x) = sum_j x_j * h_j, filled in index order (x_0 varies fastest).
    std::vector<std::size_t> digit(k, 0);
    std::size_t acc = 0;
    hit.clear();
    bool bijective = true;
    for (std::size_t x = 0; x < n; ++x) {
      perm[x] = static_cast<std::uint32_t>(acc);
      if (hit.test(acc)) {
        bijective = false;
        break;
      }
      hit.set(acc);
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t h = candidates[j][pick[j]];
        acc = g.add_index(acc, h);
        if (++digit[j] < g.orders()[j]) break;
        digit[j] = 0;  // n_j * h_j = 0, so acc has wrapped back along this axis
      }
    }
    if (bijective && perm != id) out.push_back(perm);
    std::size_t j = 0;
    while (j < k && ++pick[j] == candidates[j].size()) pick[j++] = 0;
    if (j == k) break;
  }
  return out;
}

namespace {

void invariant_factor_chains(std::uint32_t remaining, std::uint32_t prev, std::vector<std::uint32_t>& chain,
                             std::vector<std::vector<std::uint32_t>>& out) {
  if (remaining == 1) {
    out.push_back(chain);
    return;
  }
  for (std::uint32_t d = prev; d <= remaining; d += prev) {
    if (remaining % d != 0) continue;
    const std::uint32_t rest = remaining / d;
    if (rest != 1 && rest % d != 0) continue;  // later factors are multiples of d
    chain.push_back(d);
    invariant_factor_chains(rest, d, chain, out);
    chain.pop_back();
  }
}

}  // namespace

std::vector<FiniteAbelianGroup> abelian_groups_of_order(std::uint32_t n) {
  if (n == 0) throw DomainError("group order must be positive");
  if (n == 1) return {FiniteAbelianGroup({1})};
  std::vector<std::vector<std::uint32_t>> chains;
  std::vector<std::uint32_t> chain;
  for (std::uint32_t d = 2; d <= n; ++d) {
    if (n % d != 0) continue;
    const std::uint32_t rest = n / d;
    if (rest != 1 && rest % d != 0) continue;
    chain.assign(1, d);
    invariant_factor_chains(rest, d, chain, chains);
  }
  std::sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<FiniteAbelianGroup> out;
  for (auto& c : chains) out.emplace_back(std::move(c));
  return out;
}

}  // namespace sumset
