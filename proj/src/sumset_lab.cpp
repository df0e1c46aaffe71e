#include "sumsetlab/sumset_lab.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <tuple>

#include "sumsetlab/error.hpp"
#include "sumsetlab/kernels.hpp"

namespace sumset {

namespace {

void require_same_group(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b, const char* op) {
  if (!(a == b)) throw StructuralError(std::string(op) + ": subsets of " + a.literal() + " and " + b.literal());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Bitset parse_hex_mask(const FiniteAbelianGroup& g, std::string_view digits) {
  if (digits.empty()) throw DomainError("empty hex subset literal");
  Bitset out(g.size());
  std::size_t bit = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it, bit += 4) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(*it)));
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else throw DomainError("bad hex digit in subset literal: " + std::string(digits));
    for (int k = 0; k < 4; ++k) {
      if (!((v >> k) & 1)) continue;
      if (bit + k >= g.size()) throw DomainError("hex subset literal has bits beyond |G| = " + std::to_string(g.size()));
      out.set(bit + k);
    }
  }
  return out;
}

std::size_t parse_index_entry(const FiniteAbelianGroup& g, std::string_view tok) {
  long long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) throw DomainError("bad subset entry: " + std::string(tok));
  const auto n = static_cast<long long>(g.size());
  if (g.rank() == 1) return static_cast<std::size_t>(((v % n) + n) % n);
  if (v < 0 || v >= n) throw DomainError("element index out of range: " + std::string(tok));
  return static_cast<std::size_t>(v);
}

}  // namespace

GroupSubset::GroupSubset(const FiniteAbelianGroup& g, Bitset members) : group_(g), members_(std::move(members)) {
  if (members_.size() != g.size()) throw StructuralError("subset bitset does not match group size");
}

GroupSubset GroupSubset::from_indices(const FiniteAbelianGroup& g, std::span<const std::size_t> indices) {
  Bitset m(g.size());
  for (auto i : indices) {
    if (i >= g.size()) throw DomainError("element index out of range: " + std::to_string(i));
    m.set(i);
  }
  return GroupSubset(g, std::move(m));
}

GroupSubset GroupSubset::full(const FiniteAbelianGroup& g) {
  Bitset m(g.size());
  m.set_all();
  return GroupSubset(g, std::move(m));
}

GroupSubset GroupSubset::parse(const FiniteAbelianGroup& g, std::string_view literal) {
  auto s = trim(literal);
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) return GroupSubset(g, parse_hex_mask(g, s.substr(2)));
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw DomainError("subset literal must look like {0,2,4} or 0x15: " + std::string(literal));
  s = trim(s.substr(1, s.size() - 2));
  Bitset m(g.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end;
    if (s[pos] == '(') {
      end = s.find(')', pos);
      if (end == std::string_view::npos) throw DomainError("unbalanced '(' in subset literal");
      m.set(g.index_of(parse_element(g, s.substr(pos, end - pos + 1))));
      ++end;
    } else {
      end = std::min(s.find(',', pos), s.size());
      m.set(parse_index_entry(g, trim(s.substr(pos, end - pos))));
    }
    while (end < s.size() && std::isspace(static_cast<unsigned char>(s[end]))) ++end;
    if (end < s.size()) {
      if (s[end] != ',') throw DomainError("expected ',' in subset literal: " + std::string(literal));
      ++end;
      while (end < s.size() && std::isspace(static_cast<unsigned char>(s[end]))) ++end;
      if (end == s.size()) throw DomainError("trailing ',' in subset literal");
    }
    pos = end;
  }
  return GroupSubset(g, std::move(m));
}

std::string GroupSubset::literal() const {
  std::string out = "{";
  bool first = true;
  for (auto i : members_.indices()) {
    if (!first) out += ',';
    first = false;
    out += group_.rank() == 1 ? std::to_string(i) : format_element(group_.element(i));
  }
  return out + "}";
}

GroupSubset sumset(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(a.group(), b.group(), "sumset");
  return GroupSubset(a.group(), kernels::parallel::sumset(a.group(), a.members(), b.members()));
}

GroupSubset steinhaus_level_set(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(a.group(), b.group(), "steinhaus_level_set");
  const auto& g = a.group();
  const GroupFunction h = convolve(GroupFunction::indicator(g, a.members()), GroupFunction::indicator(g, b.members()));
  const double tau = steinhaus_threshold(g);
  Bitset out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x)
    if (h(x).real() > tau) out.set(x);
  return GroupSubset(g, std::move(out));
}

PigeonholeReport pigeonhole_fill_check(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(a.group(), b.group(), "pigeonhole_fill_check");
  PigeonholeReport r;
  r.forced = a.cardinality() + b.cardinality() > a.group().size();
  r.full = sumset(a, b).members().all();
  r.violation = r.forced && !r.full;
  return r;
}

GroupSubset coset_union(const GroupSubset& c, const Subgroup& h) {
  require_same_group(c.group(), h.group(), "coset_union");
  return sumset(c, GroupSubset(h.group(), h.members()));
}

GroupSubset quotient_preimage(const GroupSubset& c, const Subgroup& h) {
  require_same_group(c.group(), h.group(), "quotient_preimage");
  const auto& g = c.group();
  Bitset image(g.size());  // rho(C), keyed by coset representative
  for (auto x : c.indices()) image.set(h.coset_representative(x));
  Bitset out(g.size());
  for (std::size_t y = 0; y < g.size(); ++y)
    if (image.test(h.coset_representative(y))) out.set(y);
  return GroupSubset(g, std::move(out));
}

KneserCertificate kneser_certificate(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(a.group(), b.group(), "kneser_certificate");
  if (a.empty() || b.empty()) throw DomainError("kneser_certificate: summands must be nonempty");
  const auto& g = a.group();
  GroupSubset s = sumset(a, b);
  Subgroup h = stabilizer(g, s.members());
  const GroupSubset hs(g, h.members());
  KneserCertificate c{h, s};
  c.a_size = a.cardinality();
  c.b_size = b.cardinality();
  c.sum_size = s.cardinality();
  c.h_size = h.order();
  c.a_plus_h = sumset(a, hs).cardinality();
  c.b_plus_h = sumset(b, hs).cardinality();
  c.periodic = sumset(s, hs) == s;
  c.small_sumset = c.sum_size < c.a_size + c.b_size;
  c.satisfied_inequality = c.sum_size + c.h_size >= c.a_plus_h + c.b_plus_h;
  return c;
}

GroupSubset density_point_refine(const GroupSubset& a, std::span<const GroupSubset> neighborhoods, double threshold) {
  if (!(threshold > 0.5 && threshold <= 1.0)) throw DomainError("density threshold must lie in (0.5, 1]");
  if (neighborhoods.empty()) throw DomainError("density_point_refine needs at least one neighborhood");
  const auto& g = a.group();
  for (std::size_t n = 0; n < neighborhoods.size(); ++n) {
    const auto& u = neighborhoods[n];
    require_same_group(g, u.group(), "density_point_refine");
    if (!u.contains(0)) throw DomainError("neighborhood " + std::to_string(n) + " does not contain 0");
    for (auto x : u.indices())
      if (!u.contains(g.neg_index(x))) throw DomainError("neighborhood " + std::to_string(n) + " is not symmetric");
    if (n > 0 && !u.members().is_subset_of(neighborhoods[n - 1].members()))
      throw DomainError("neighborhoods must decrease by inclusion");
  }
  Bitset out(g.size());
  for (auto x : a.indices()) {
    for (const auto& u : neighborhoods) {
      std::size_t hits = 0;
      for (auto y : u.indices()) hits += a.contains(g.add_index(x, y));
      if (static_cast<double>(hits) > threshold * static_cast<double>(u.cardinality())) {
        out.set(x);
        break;
      }
    }
  }
  return GroupSubset(g, std::move(out));
}

LevelSetReport level_set_sumset_check(const GroupFunction& f, const GroupFunction& g) {
  const auto& grp = f.group();
  if (!(grp == g.group())) throw StructuralError("level_set_sumset_check: functions live on different groups");
  double min_f = 1.0, min_g = 1.0;
  Bitset sf(grp.size()), sg(grp.size());
  for (std::size_t x = 0; x < grp.size(); ++x) {
    for (auto [v, bits, lo] : {std::tuple{f(x), &sf, &min_f}, std::tuple{g(x), &sg, &min_g}}) {
      if (v.imag() != 0.0 || !(v.real() >= 0.0 && v.real() <= 1.0))
        throw DomainError("level_set_sumset_check: values must be real and in [0,1]");
      if (v.real() > 0) {
        bits->set(x);
        *lo = std::min(*lo, v.real());
      }
    }
  }
  // On the sumset f*g >= min_f * min_g / |G|; elsewhere it vanishes exactly, so half that separates them.
  const double tau = 0.5 * min_f * min_g / static_cast<double>(grp.size());
  const GroupFunction h = convolve(f, g);
  Bitset level(grp.size());
  for (std::size_t x = 0; x < grp.size(); ++x)
    if (h(x).real() > tau) level.set(x);
  LevelSetReport r{GroupSubset(grp, sf), GroupSubset(grp, sg), GroupSubset(grp, level), tau};
  r.contained = sumset(r.support_f, r.support_g).members().is_subset_of(level);
  r.measure_f = r.support_f.density();
  r.measure_g = r.support_g.density();
  r.measure_level = r.level_set.density();
  return r;
}

}  // namespace sumset
