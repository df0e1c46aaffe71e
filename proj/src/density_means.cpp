#include "sumsetlab/density_means.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "sumsetlab/error.hpp"
#include "sumsetlab/floors.hpp"
#include "sumsetlab/kernels.hpp"
#include "rule_text.hpp"

namespace sumset {

std::size_t window_cap_bits() {
  static const std::size_t cap = [] {
    std::size_t v = std::size_t{1} << 28;
    if (const char* env = std::getenv("SUMSETLAB_CAP_BITS")) {
      std::size_t parsed = 0;
      auto [p, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), parsed);
      if (ec == std::errc() && *p == '\0' && parsed > 0) v = parsed;
    }
    return v;
  }();
  return cap;
}

// ---------------------------------------------------------------------------
// Rule language

struct SetRule::Node {
  enum class Op {
    all, empty, even, odd, mod, squares, signed_squares, floor_pow, dyadic_runs,
    intervals, random, bitmask, negate, unite, intersect, shift
  };
  Op op = Op::all;
  std::int64_t q = 1;                  // mod
  std::vector<std::int64_t> residues;  // mod
  ExactReal c;                         // floor_pow
  std::vector<Interval> intervals;
  ExactReal p;                         // random
  std::uint64_t seed = 0;
  std::shared_ptr<const Bitset> mask;  // bitmask
  std::int64_t mask_lo = 0;
  std::string path;
  std::int64_t t = 0;                  // shift
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using Node = SetRule::Node;
using Op = Node::Op;
using namespace detail;

std::shared_ptr<const Bitset> load_bitmask(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read bitmask file " + path);
  std::vector<bool> bits;
  char ch;
  while (in.get(ch)) {
    if (ch == '0' || ch == '1') bits.push_back(ch == '1');
    else if (!std::isspace(static_cast<unsigned char>(ch))) throw DomainError("bitmask file has a character other than 0/1: " + path);
  }
  auto out = std::make_shared<Bitset>(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out->set(i);
  return out;
}

std::shared_ptr<const Node> parse_node(std::string_view text) {
  auto [name, args] = split_call(text);
  auto n = std::make_shared<Node>();
  if (name == "all" || name == "integers") {
    expect_args(name, args, 0, 0);
    n->op = Op::all;
  } else if (name == "empty") {
    expect_args(name, args, 0, 0);
    n->op = Op::empty;
  } else if (name == "even" || name == "odd") {
    expect_args(name, args, 0, 0);
    n->op = name == "even" ? Op::even : Op::odd;
  } else if (name == "mod") {
    expect_args(name, args, 2, 1u << 20);
    n->op = Op::mod;
    n->q = parse_int(args[0], "mod modulus");
    if (n->q < 1) throw DomainError("mod modulus must be >= 1");
    for (std::size_t i = 1; i < args.size(); ++i) {
      const std::int64_t r = parse_int(args[i], "mod residue");
      n->residues.push_back(((r % n->q) + n->q) % n->q);
    }
    std::sort(n->residues.begin(), n->residues.end());
    n->residues.erase(std::unique(n->residues.begin(), n->residues.end()), n->residues.end());
  } else if (name == "squares" || name == "signed_squares") {
    expect_args(name, args, 0, 0);
    n->op = name == "squares" ? Op::squares : Op::signed_squares;
  } else if (name == "floor_pow") {
    expect_args(name, args, 1, 2);
    if (args.size() == 2 && trim(args[0]) != "n") throw DomainError("floor_pow(n, c): first argument must be n");
    n->op = Op::floor_pow;
    n->c = ExactReal::parse(args.back());
    if (n->c.num <= 0) throw DomainError("floor_pow exponent must be positive");
  } else if (name == "dyadic_runs") {
    expect_args(name, args, 0, 0);
    n->op = Op::dyadic_runs;
  } else if (name == "union_intervals") {
    n->op = Op::intervals;
    for (auto a : args) {
      if (a.size() < 2 || a.front() != '[' || a.back() != ']') throw DomainError("interval must look like [a,b]");
      const auto inner = a.substr(1, a.size() - 2);
      const auto comma = inner.find(',');
      if (comma == std::string_view::npos) throw DomainError("interval must look like [a,b]");
      Interval iv{parse_int(inner.substr(0, comma), "interval"), parse_int(inner.substr(comma + 1), "interval")};
      if (iv.lo > iv.hi) throw DomainError("interval with lo > hi");
      n->intervals.push_back(iv);
    }
  } else if (name == "random") {
    expect_args(name, args, 2, 2);
    n->op = Op::random;
    n->p = ExactReal::parse(args[0]);
    if (n->p.num < 0 || n->p.num > n->p.den) throw DomainError("random density must lie in [0,1]");
    n->seed = static_cast<std::uint64_t>(parse_int(args[1], "random seed"));
  } else if (name == "bitmask") {
    expect_args(name, args, 1, 2);
    n->op = Op::bitmask;
    n->path = std::string(args[0]);
    n->mask = load_bitmask(n->path);
    if (args.size() == 2) n->mask_lo = parse_int(args[1], "bitmask offset");
  } else if (name == "not") {
    expect_args(name, args, 1, 1);
    n->op = Op::negate;
    n->kids.push_back(parse_node(args[0]));
  } else if (name == "union" || name == "intersect") {
    expect_args(name, args, 1, 1u << 20);
    n->op = name == "union" ? Op::unite : Op::intersect;
    for (auto a : args) n->kids.push_back(parse_node(a));
  } else if (name == "shift") {
    expect_args(name, args, 2, 2);
    n->op = Op::shift;
    n->kids.push_back(parse_node(args[0]));
    n->t = parse_int(args[1], "shift");
  } else {
    throw DomainError("unknown set rule '" + name + "'");
  }
  return n;
}

std::string render(const Node& n) {
  auto join = [](const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
    return s;
  };
  switch (n.op) {
    case Op::all: return "all";
    case Op::empty: return "empty";
    case Op::even: return "even";
    case Op::odd: return "odd";
    case Op::mod: {
      std::vector<std::string> parts{std::to_string(n.q)};
      for (auto r : n.residues) parts.push_back(std::to_string(r));
      return "mod(" + join(parts) + ")";
    }
    case Op::squares: return "squares";
    case Op::signed_squares: return "signed_squares";
    case Op::floor_pow: return "floor_pow(" + n.c.text() + ")";
    case Op::dyadic_runs: return "dyadic_runs";
    case Op::intervals: {
      std::vector<std::string> parts;
      for (auto iv : n.intervals) parts.push_back("[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]");
      return "union_intervals(" + join(parts) + ")";
    }
    case Op::random: return "random(" + n.p.text() + "," + std::to_string(n.seed) + ")";
    case Op::bitmask: return "bitmask(" + n.path + (n.mask_lo ? "," + std::to_string(n.mask_lo) : "") + ")";
    case Op::negate: return "not(" + render(*n.kids[0]) + ")";
    case Op::unite:
    case Op::intersect: {
      std::vector<std::string> parts;
      for (const auto& k : n.kids) parts.push_back(render(*k));
      return std::string(n.op == Op::unite ? "union(" : "intersect(") + join(parts) + ")";
    }
    case Op::shift: return "shift(" + render(*n.kids[0]) + "," + std::to_string(n.t) + ")";
  }
  return {};
}

bool is_square(std::int64_t x) {
  if (x < 0) return false;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r * r == x;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Smallest n >= 1 with floor(n^c) >= x, for x >= 1.
std::uint64_t first_index_reaching(std::int64_t x, const ExactReal& c) {
  const long double est = std::pow(static_cast<long double>(x), 1.0L / c.value());
  std::uint64_t lo = 1, hi = static_cast<std::uint64_t>(est * (1 + 1e-9L)) + 2;
  if (est > 3) lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(est * (1 - 1e-9L)) - 2);
  while (lo > 1 && floor_pow(lo, c) >= x) lo = lo / 2;
  while (floor_pow(hi, c) < x) hi *= 2;
  // invariant: floor_pow(hi) >= x, and lo == 1 or floor_pow(lo) < x
  if (floor_pow(lo, c) >= x) return lo;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (floor_pow(mid, c) >= x ? hi : lo) = mid;
  }
  return hi;
}

bool node_contains(const Node& n, std::int64_t x) {
  switch (n.op) {
    case Op::all: return true;
    case Op::empty: return false;
    case Op::even: return x % 2 == 0;
    case Op::odd: return x % 2 != 0;
    case Op::mod: {
      const std::int64_t r = ((x % n.q) + n.q) % n.q;
      return std::binary_search(n.residues.begin(), n.residues.end(), r);
    }
    case Op::squares: return is_square(x);
    case Op::signed_squares: return is_square(x < 0 ? -x : x);
    case Op::floor_pow: return x >= 1 && floor_pow(first_index_reaching(x, n.c), n.c) == x;
    case Op::dyadic_runs: {
      if (x < 2) return false;
      const int k = std::bit_width(static_cast<std::uint64_t>(x)) - 1;
      return x - (std::int64_t{1} << k) <= k;
    }
    case Op::intervals:
      for (auto iv : n.intervals)
        if (iv.lo <= x && x <= iv.hi) return true;
      return false;
    case Op::random: {
      const std::uint64_t h = splitmix(static_cast<std::uint64_t>(x) ^ splitmix(n.seed));
      // h / 2^64 < num / den, exactly
      return static_cast<unsigned __int128>(h) * static_cast<unsigned __int128>(n.p.den) <
             (static_cast<unsigned __int128>(n.p.num) << 64);
    }
    case Op::bitmask: {
      const std::int64_t i = x - n.mask_lo;
      return i >= 0 && static_cast<std::uint64_t>(i) < n.mask->size() && n.mask->test(static_cast<std::size_t>(i));
    }
    case Op::negate: return !node_contains(*n.kids[0], x);
    case Op::unite:
      for (const auto& k : n.kids)
        if (node_contains(*k, x)) return true;
      return false;
    case Op::intersect:
      for (const auto& k : n.kids)
        if (!node_contains(*k, x)) return false;
      return true;
    case Op::shift: return node_contains(*n.kids[0], x - n.t);
  }
  return false;
}

void node_fill(const Node& n, std::int64_t lo, Bitset& out) {
  const std::size_t len = out.size();
  if (len == 0) return;
  const std::int64_t hi = lo + static_cast<std::int64_t>(len) - 1;
  switch (n.op) {
    case Op::all: out.set_all(); return;
    case Op::empty: out.clear(); return;
    case Op::floor_pow: {
      out.clear();
      if (hi < 1) return;
      for (std::uint64_t k = first_index_reaching(std::max<std::int64_t>(lo, 1), n.c);; ++k) {
        const std::int64_t v = floor_pow(k, n.c);
        if (v > hi) break;
        out.set(static_cast<std::size_t>(v - lo));
      }
      return;
    }
    case Op::squares:
    case Op::signed_squares: {
      out.clear();
      for (std::int64_t r = 0; r * r <= std::max(hi, n.op == Op::signed_squares ? -lo : hi); ++r) {
        const std::int64_t s = r * r;
        if (lo <= s && s <= hi) out.set(static_cast<std::size_t>(s - lo));
        if (n.op == Op::signed_squares && lo <= -s && -s <= hi) out.set(static_cast<std::size_t>(-s - lo));
      }
      return;
    }
    case Op::intervals: {
      out.clear();
      for (auto iv : n.intervals) {
        const std::int64_t a = std::max(iv.lo, lo), b = std::min(iv.hi, hi);
        if (a <= b) out.set_range(static_cast<std::size_t>(a - lo), static_cast<std::size_t>(b - lo) + 1);
      }
      return;
    }
    case Op::negate:
      node_fill(*n.kids[0], lo, out);
      out.flip();
      return;
    case Op::unite:
    case Op::intersect: {
      node_fill(*n.kids[0], lo, out);
      Bitset tmp(len);
      for (std::size_t i = 1; i < n.kids.size(); ++i) {
        node_fill(*n.kids[i], lo, tmp);
        if (n.op == Op::unite) out |= tmp;
        else out &= tmp;
      }
      return;
    }
    case Op::shift: node_fill(*n.kids[0], lo - n.t, out); return;
    default: break;
  }
  // Pointwise rules: word-parallel, each word written by one thread.
  out.clear();
  auto words = out.words();
#pragma omp parallel for schedule(static) if (len >= (1u << 16))
  for (std::ptrdiff_t w = 0; w < static_cast<std::ptrdiff_t>(words.size()); ++w) {
    std::uint64_t bits = 0;
    const std::size_t base = static_cast<std::size_t>(w) * 64;
    for (std::size_t b = 0; b < 64 && base + b < len; ++b)
      if (node_contains(n, lo + static_cast<std::int64_t>(base + b))) bits |= std::uint64_t{1} << b;
    words[static_cast<std::size_t>(w)] = bits;
  }
}

}  // namespace

SetRule SetRule::parse(std::string_view text) {
  SetRule r;
  r.root_ = parse_node(text);
  r.text_ = render(*r.root_);
  return r;
}

bool SetRule::contains(std::int64_t x) const { return node_contains(*root_, x); }

void SetRule::fill(std::int64_t lo, Bitset& out) const { node_fill(*root_, lo, out); }

std::uint64_t SetRule::count(std::int64_t lo, std::int64_t hi) const {
  constexpr std::int64_t chunk = std::int64_t{1} << 20;
  std::uint64_t total = 0;
  Bitset buf;
  for (std::int64_t a = lo; a <= hi; a += chunk) {
    const std::int64_t b = std::min(hi, a + chunk - 1);
    if (buf.size() != static_cast<std::size_t>(b - a + 1)) buf = Bitset(static_cast<std::size_t>(b - a + 1));
    fill(a, buf);
    total += buf.count();
  }
  return total;
}

// ---------------------------------------------------------------------------
// WindowSet

namespace {

Bitset slice(const Bitset& bits, std::size_t offset, std::size_t len) {
  Bitset out(len);
  out.or_shifted_down(bits, offset);
  return out;
}

/// Bit t set iff bits[t, t + len) are all set.
Bitset run_starts(const Bitset& bits, std::size_t len) {
  Bitset result(bits.size());
  result.set_all();
  Bitset power = bits;  // bit t: bits[t, t + m) all set
  std::size_t covered = 0;
  for (std::size_t m = 1; len; m *= 2, len >>= 1) {
    if (len & 1) {
      Bitset tmp(bits.size());
      tmp.or_shifted_down(power, covered);
      result &= tmp;
      covered += m;
    }
    if (len > 1) {
      Bitset tmp(bits.size());
      tmp.or_shifted_down(power, m);
      power &= tmp;
    }
  }
  return result;
}

/// bits | bits << 1 | ... | bits << g.
Bitset thicken(const Bitset& bits, std::size_t g) {
  Bitset result = bits;
  Bitset power = bits;  // bits + [0, m)
  std::size_t covered = 1, m = 1;
  std::size_t need = g;
  while (need) {
    if (need & 1) {
      result.or_shifted_up(power, covered);
      covered += m;
    }
    need >>= 1;
    if (need) {
      Bitset tmp = power;
      tmp.or_shifted_up(power, m);
      power = std::move(tmp);
      m *= 2;
    }
  }
  return result;
}

}  // namespace

WindowSet::WindowSet(std::int64_t lo, std::int64_t hi, Bitset members) : lo_(lo), hi_(hi), members_(std::move(members)) {
  if (lo > hi) throw DomainError("window needs lo <= hi");
  if (members_.size() != static_cast<std::uint64_t>(hi - lo) + 1) throw StructuralError("window bitset length mismatch");
}

WindowSet WindowSet::from_rule(const SetRule& rule, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw DomainError("window needs lo <= hi");
  const std::uint64_t len = static_cast<std::uint64_t>(hi - lo) + 1;
  if (len > window_cap_bits())
    throw CapacityError("window of " + std::to_string(len) + " bits exceeds the cap of " + std::to_string(window_cap_bits()));
  Bitset bits(static_cast<std::size_t>(len));
  rule.fill(lo, bits);
  WindowSet w(lo, hi, std::move(bits));
  w.rule_ = rule;
  return w;
}

WindowSet WindowSet::from_elements(std::int64_t lo, std::int64_t hi, const std::vector<std::int64_t>& xs) {
  if (lo > hi) throw DomainError("window needs lo <= hi");
  Bitset bits(static_cast<std::size_t>(hi - lo) + 1);
  for (auto x : xs) {
    if (x < lo || x > hi) throw DomainError("element " + std::to_string(x) + " outside the window");
    bits.set(static_cast<std::size_t>(x - lo));
  }
  return WindowSet(lo, hi, std::move(bits));
}

bool WindowSet::contains(std::int64_t x) const {
  if (x < lo_ || x > hi_) throw DomainError("point " + std::to_string(x) + " outside window");
  return members_.test(static_cast<std::size_t>(x - lo_));
}

std::size_t WindowSet::count(std::int64_t a, std::int64_t b) const {
  if (a > b) return 0;
  if (!covers(a, b)) throw DomainError("count range outside window");
  return members_.count_range(static_cast<std::size_t>(a - lo_), static_cast<std::size_t>(b - lo_) + 1);
}

WindowSet WindowSet::translate(std::int64_t t) const {
  WindowSet w(lo_ + t, hi_ + t, members_);
  if (rule_) w.rule_ = SetRule::parse("shift(" + rule_->text() + "," + std::to_string(t) + ")");
  return w;
}

std::vector<std::int64_t> WindowSet::elements() const {
  std::vector<std::int64_t> out;
  out.reserve(members_.count());
  for (auto i : members_.indices()) out.push_back(lo_ + static_cast<std::int64_t>(i));
  return out;
}

// ---------------------------------------------------------------------------
// Folner families and densities

Interval FolnerFamily::window(std::uint64_t n) const {
  const auto k = static_cast<std::int64_t>(n);
  switch (kind) {
    case Kind::centered: return {-k, k};
    case Kind::initial: return {1, k};
    case Kind::shifted: return {offset, offset + k - 1};
  }
  return {};
}

FolnerFamily FolnerFamily::parse(std::string_view text) {
  auto [name, args] = split_call(text);
  if (name == "centered" && args.empty()) return {Kind::centered, 0};
  if (name == "initial" && args.empty()) return {Kind::initial, 0};
  if (name == "shifted" && args.size() == 1) return {Kind::shifted, parse_int(args[0], "shift")};
  throw DomainError("unknown Folner family '" + std::string(text) + "' (centered | initial | shifted(t))");
}

std::string FolnerFamily::text() const {
  switch (kind) {
    case Kind::centered: return "centered";
    case Kind::initial: return "initial";
    case Kind::shifted: return "shifted(" + std::to_string(offset) + ")";
  }
  return {};
}

namespace {

std::uint64_t count_in(const WindowSet& a, Interval iv) {
  if (a.covers(iv.lo, iv.hi)) return a.count(iv.lo, iv.hi);
  if (!a.rule()) throw CapacityError("window [" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "] outside the materialized set and no rule to stream from");
  return a.rule()->count(iv.lo, iv.hi);
}

bool point_in(const WindowSet& a, std::int64_t x) {
  if (a.covers(x, x)) return a.contains(x);
  return a.rule()->contains(x);
}

}  // namespace

FolnerDensities folner_density(const WindowSet& a, const FolnerFamily& fam, std::uint64_t n) {
  if (n == 0) throw DomainError("Folner depth must be >= 1");
  const std::uint64_t k0 = std::max<std::uint64_t>(1, n / 2);
  const Interval last = fam.window(n);
  if (!a.covers(last.lo, last.hi) && !a.rule())
    throw CapacityError("F_" + std::to_string(n) + " leaves the window and the set has no rule");
  Interval cur = fam.window(k0);
  std::uint64_t count = count_in(a, cur);
  FolnerDensities d;
  d.lower.kind = DensityKind::lower;
  d.upper.kind = DensityKind::upper;
  for (std::uint64_t k = k0;; ++k) {
    const double v = static_cast<double>(count) / static_cast<double>(cur.size());
    auto record = [&](DensityEstimate& e, bool better) {
      if (k == k0 || better) {
        e.value = v;
        e.count = count;
        e.size = cur.size();
        e.witness = static_cast<std::int64_t>(k);
        e.window = cur;
      }
    };
    record(d.lower, v < d.lower.value);
    record(d.upper, v > d.upper.value);
    if (k == n) break;
    const Interval next = fam.window(k + 1);
    for (std::int64_t x = next.lo; x < cur.lo; ++x) count += point_in(a, x);
    for (std::int64_t x = cur.hi + 1; x <= next.hi; ++x) count += point_in(a, x);
    cur = next;
  }
  return d;
}

DensityEstimate banach_upper_density(const WindowSet& a, std::uint64_t window_len, Interval search) {
  if (search.lo > search.hi) throw DomainError("empty search range");
  if (window_len == 0) throw DomainError("window length must be >= 1");
  if (window_len > search.size()) throw DomainError("window length exceeds the search range");
  Bitset bits;
  if (a.covers(search.lo, search.hi)) {
    bits = slice(a.members(), static_cast<std::size_t>(search.lo - a.lo()), static_cast<std::size_t>(search.size()));
  } else if (a.rule()) {
    bits = WindowSet::from_rule(*a.rule(), search.lo, search.hi).members();
  } else {
    throw CapacityError("search range outside the materialized set and no rule to extend it");
  }
  const auto best = kernels::parallel::sliding_window_max(bits, static_cast<std::size_t>(window_len));
  DensityEstimate e;
  e.kind = DensityKind::banach_upper;
  e.count = best.count;
  e.size = window_len;
  e.value = static_cast<double>(best.count) / static_cast<double>(window_len);
  e.witness = search.lo + static_cast<std::int64_t>(best.offset);
  e.window = {e.witness, e.witness + static_cast<std::int64_t>(window_len) - 1};
  return e;
}

ThickReport classify_thick(const WindowSet& a, std::uint64_t probe_len) {
  if (probe_len == 0) throw DomainError("probe length must be >= 1");
  ThickReport r;
  const auto run = kernels::parallel::longest_run(a.members(), 0, a.length());
  r.max_run = run.length;
  r.max_run_start = a.lo() + static_cast<std::int64_t>(run.start);
  if (run.length >= probe_len) {
    const auto t = run_starts(a.members(), static_cast<std::size_t>(probe_len)).find_first();
    r.thick_at_scale = true;
    r.witness = a.lo() + static_cast<std::int64_t>(t);
  }
  return r;
}

SyndeticReport classify_syndetic(const WindowSet& a, std::uint64_t gap_bound) {
  SyndeticReport r;
  const auto& bits = a.members();
  if (bits.count() < 2) return r;
  r.determinate = true;
  const std::size_t first = bits.find_first();
  std::size_t last = first;
  for (std::size_t i = first; i != Bitset::npos; i = bits.find_next(i + 1)) last = i;
  Bitset holes = bits;
  holes.flip();
  const auto run = kernels::parallel::longest_run(holes, first + 1, last);
  r.max_gap = run.length + 1;
  const std::size_t from = run.length ? run.start - 1 : first;
  r.gap_from = a.lo() + static_cast<std::int64_t>(from);
  r.gap_to = r.gap_from + static_cast<std::int64_t>(r.max_gap);
  r.syndetic_at_scale = r.max_gap <= gap_bound;
  return r;
}

PiecewiseSyndeticReport classify_piecewise_syndetic(const WindowSet& a, std::uint64_t gap, std::uint64_t run) {
  if (run == 0) throw DomainError("run length must be >= 1");
  PiecewiseSyndeticReport r;
  r.gap = gap;
  r.run = run;
  if (gap >= a.length()) return r;
  const Bitset thick = thicken(a.members(), static_cast<std::size_t>(gap));
  const auto g = static_cast<std::size_t>(gap);
  r.max_run = kernels::parallel::longest_run(thick, g, thick.size()).length;
  if (r.max_run >= run) {
    const auto t = run_starts(thick, static_cast<std::size_t>(run)).find_next(g);
    r.piecewise_syndetic_at_scale = true;
    r.witness = a.lo() + static_cast<std::int64_t>(t);
  }
  return r;
}

EmbeddingReport finite_embeddability(const WindowSet& a, const WindowSet& b, std::size_t k, const EmbeddingOptions& options) {
  if (k == 0) throw DomainError("probe size must be >= 1");
  const auto elems = a.elements();
  EmbeddingReport rep;
  if (elems.size() < k) {
    rep.exhaustive = true;
    return rep;
  }
  // C(|A|, k), saturating at the cap
  std::uint64_t combos = 1;
  bool over = false;
  for (std::size_t i = 0; i < k && !over; ++i) {
    const unsigned __int128 next = static_cast<unsigned __int128>(combos) * (elems.size() - i) / (i + 1);
    if (next > options.exhaustive_cap) over = true;
    else combos = static_cast<std::uint64_t>(next);
  }
  if (over && !options.allow_sampling)
    throw CapacityError("more than " + std::to_string(options.exhaustive_cap) + " probes of size " + std::to_string(k));
  rep.exhaustive = !over;

  const auto& bb = b.members();
  auto find_translate = [&](const std::vector<std::int64_t>& probe) -> std::optional<std::int64_t> {
    const std::int64_t f0 = probe.front();
    auto fits = [&](std::int64_t t) {
      for (auto f : probe)
        if (!b.covers(f + t, f + t) || !bb.test(static_cast<std::size_t>(f + t - b.lo()))) return false;
      return true;
    };
    if (fits(0)) return 0;
    // positions y of f0 + t: B cap (B - d_1) cap ... with d_i = f_i - f0
    Bitset cand = bb;
    for (std::size_t i = 1; i < probe.size(); ++i) {
      const auto d = static_cast<std::size_t>(probe[i] - f0);
      if (d >= cand.size()) return std::nullopt;
      Bitset tmp(bb.size());
      tmp.or_shifted_down(bb, d);
      cand &= tmp;
    }
    const auto y = cand.find_first();
    if (y == Bitset::npos) return std::nullopt;
    return b.lo() + static_cast<std::int64_t>(y) - f0;
  };

  auto check = [&](const std::vector<std::int64_t>& probe) {
    ++rep.probes;
    if (auto t = find_translate(probe)) {
      rep.witnesses.push_back({probe, *t});
      return true;
    }
    rep.embeds = false;
    if (!rep.failing_probe) rep.failing_probe = probe;
    ++rep.failures;
    if (rep.failing_probes.size() < 16) rep.failing_probes.push_back(probe);
    return !options.stop_on_failure;
  };

  std::vector<std::int64_t> probe(k);
  if (rep.exhaustive) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      for (std::size_t i = 0; i < k; ++i) probe[i] = elems[idx[i]];
      if (!check(probe)) return rep;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == elems.size() - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
    for (std::uint64_t s = 0; s < options.samples; ++s) {
      std::vector<std::size_t> idx;
      while (idx.size() < k) {
        const std::size_t i = pick(rng);
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
      }
      std::sort(idx.begin(), idx.end());
      for (std::size_t i = 0; i < k; ++i) probe[i] = elems[idx[i]];
      if (!check(probe)) return rep;
    }
  }
  return rep;
}

MeanEstimate mean_from_family(const FolnerFamily& fam, const std::function<std::complex<double>(std::int64_t)>& f,
                              std::uint64_t n) {
  if (n == 0) throw DomainError("Folner depth must be >= 1");
  const std::uint64_t k0 = std::max<std::uint64_t>(1, n / 2);
  Interval cur = fam.window(k0);
  std::complex<long double> sum{};
  for (std::int64_t x = cur.lo; x <= cur.hi; ++x) sum += std::complex<long double>(f(x));
  double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
  std::complex<double> value;
  for (std::uint64_t k = k0;; ++k) {
    value = std::complex<double>(sum / static_cast<long double>(cur.size()));
    if (k == k0) {
      re_lo = re_hi = value.real();
      im_lo = im_hi = value.imag();
    } else {
      re_lo = std::min(re_lo, value.real());
      re_hi = std::max(re_hi, value.real());
      im_lo = std::min(im_lo, value.imag());
      im_hi = std::max(im_hi, value.imag());
    }
    if (k == n) break;
    const Interval next = fam.window(k + 1);
    for (std::int64_t x = next.lo; x < cur.lo; ++x) sum += std::complex<long double>(f(x));
    for (std::int64_t x = cur.hi + 1; x <= next.hi; ++x) sum += std::complex<long double>(f(x));
    cur = next;
  }
  return {value, std::max(re_hi - re_lo, im_hi - im_lo)};
}

}  // namespace sumset
