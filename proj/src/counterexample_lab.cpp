#include "sumsetlab/counterexample_lab.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>

#include "rule_text.hpp"
#include "sumsetlab/error.hpp"
#include "sumsetlab/kernels.hpp"

namespace sumset {

using detail::expect_args;
using detail::parse_int;
using detail::split_call;
using detail::trim;

namespace {

using i128 = __int128;

std::int64_t checked(i128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw CapacityError(std::string(what) + " overflows 64-bit integers");
  return static_cast<std::int64_t>(v);
}

// "1.9" -> 19/10, "3" -> 3/1, "7/4" -> 7/4
std::pair<std::int64_t, std::int64_t> parse_ratio(std::string_view s) {
  s = trim(s);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto p = parse_int(s.substr(0, slash), "ratio");
    const auto q = parse_int(s.substr(slash + 1), "ratio");
    if (q < 1) throw DomainError("ratio denominator must be >= 1");
    return {p, q};
  }
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return {parse_int(s, "ratio"), 1};
  const auto frac = s.substr(dot + 1);
  if (frac.empty() || frac.size() > 12 || frac.find_first_not_of("0123456789") != std::string_view::npos)
    throw DomainError("expected a decimal ratio, got '" + std::string(s) + "'");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t whole = dot == 0 ? 0 : parse_int(s.substr(0, dot), "ratio");
  if (whole < 0) throw DomainError("ratio must be positive");
  return {whole * den + parse_int(frac, "ratio"), den};
}

std::string ratio_text(std::int64_t p, std::int64_t q) {
  if (q == 1) return std::to_string(p);
  std::int64_t d = q;
  int digits = 0;
  while (d % 10 == 0) d /= 10, ++digits;
  if (d != 1) return std::to_string(p) + "/" + std::to_string(q);
  std::string frac = std::to_string(p % q);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return std::to_string(p / q) + "." + frac;
}

std::int64_t first_of_parity(std::int64_t x, int parity) { return ((x % 2) + 2) % 2 == parity ? x : x + 1; }
std::int64_t last_of_parity(std::int64_t x, int parity) { return ((x % 2) + 2) % 2 == parity ? x : x - 1; }

int parity_of(std::int64_t x) { return static_cast<int>(((x % 2) + 2) % 2); }

// Bitset over F with the runs (clipped) marked; a run of step 2 is the range cover
// intersected with the matching parity lane.
class BlockCover {
 public:
  explicit BlockCover(Interval f) : f_(f), even_(f.size()), odd_(f.size()) {}

  void add(ParityRun r) {
    if (r.empty()) return;
    const std::int64_t lo = std::max(r.first, f_.lo), hi = std::min(r.last, f_.hi);
    if (lo > hi) return;
    (parity_of(r.first) == 0 ? even_ : odd_)
        .set_range(static_cast<std::size_t>(lo - f_.lo), static_cast<std::size_t>(hi - f_.lo) + 1);
  }

  Bitset bits() const {
    Bitset out(f_.size());
    // bit i is x = lo + i; even lanes sit at i with (lo + i) even
    const std::uint64_t lane0 = parity_of(f_.lo) == 0 ? 0x5555555555555555ULL : 0xAAAAAAAAAAAAAAAAULL;
    auto ow = out.words();
    const auto ew = even_.words(), dw = odd_.words();
    for (std::size_t i = 0; i < ow.size(); ++i) ow[i] = (ew[i] & lane0) | (dw[i] & ~lane0);
    return out;
  }

 private:
  Interval f_;
  Bitset even_, odd_;
};

void check_cap(std::uint64_t bits) {
  if (bits > window_cap_bits())
    throw CapacityError("window of " + std::to_string(bits) + " bits exceeds the cap of " +
                        std::to_string(window_cap_bits()));
}

// Sums A_m + B_m' restricted to F_n; `pick` selects which (m, m') pairs count.
template <class Pick>
Bitset block_sumset(const ExampleSets& sets, std::int64_t n, Pick pick) {
  const auto& F = sets.block(n).F;
  BlockCover cover(F);
  for (std::int64_t m = 1; m <= n; ++m)
    for (std::int64_t mp = 1; mp <= n; ++mp) {
      if (!pick(m, mp)) continue;
      const auto bp = b_piece(sets.block(mp));
      for (const auto& ap : a_pieces(sets.block(m))) cover.add(run_sum(ap, bp));
    }
  return cover.bits();
}

}  // namespace

// ---------------------------------------------------------------------------
// parameters

GrowthPolicy GrowthPolicy::parse(std::string_view text) {
  text = trim(text);
  if (text == "default") return {};
  auto [name, args] = split_call(text);
  if (name != "policy") throw DomainError("expected policy(...) or default, got '" + std::string(text) + "'");
  expect_args(name, args, 1, 1);
  GrowthPolicy p;
  std::string_view body = args[0];
  while (!body.empty()) {
    const auto semi = body.find(';');
    const auto item = trim(body.substr(0, semi));
    body = semi == std::string_view::npos ? std::string_view{} : body.substr(semi + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw DomainError("expected key=value in policy, got '" + std::string(item) + "'");
    const auto key = trim(item.substr(0, eq));
    auto val = trim(item.substr(eq + 1));
    if (key == "ratio") {
      std::tie(p.ratio_num, p.ratio_den) = parse_ratio(val);
      if (p.ratio_num <= 0) throw DomainError("ratio must be positive");
    } else if (key == "next") {
      p.step_grows = !val.empty() && val.back() == 'n';
      if (p.step_grows) val.remove_suffix(1);
      p.step = val.empty() ? 1 : parse_int(val, "next");
      if (p.step < 1) throw DomainError("next factor must be >= 1");
    } else {
      throw DomainError("unknown policy key '" + std::string(key) + "'");
    }
  }
  return p;
}

std::string GrowthPolicy::text() const {
  return "policy(ratio=" + ratio_text(ratio_num, ratio_den) + "; next=" + std::to_string(step) + (step_grows ? "n" : "") +
         ")";
}

void validate_parameters(const ExampleParameters& p) {
  if (p.a.size() != p.b.size()) throw DomainError("a and b must have the same length");
  if (p.a.empty()) throw DomainError("depth must be >= 1");
  const std::size_t N = p.depth();
  for (std::size_t i = 0; i < N; ++i) {
    const auto n = static_cast<long long>(i + 1);
    if (p.a[i] < 1) throw ConstructionError("increasing", n);
    if (!(2 * static_cast<i128>(p.a[i]) > p.b[i])) throw ConstructionError("2an", n);
    if (!(p.a[i] < p.b[i])) throw ConstructionError("increasing", n);
    if (i + 1 < N && !(p.a[i + 1] > 2 * static_cast<i128>(p.b[i]))) throw ConstructionError("anplus1", n);
  }
  // r_n = (b_{n+1} - a_{n+1}) / b_n, compared by cross-multiplication
  for (std::size_t i = 0; i + 2 < N; ++i) {
    const i128 lhs = static_cast<i128>(p.b[i + 1] - p.a[i + 1]) * p.b[i + 1];
    const i128 rhs = static_cast<i128>(p.b[i + 2] - p.a[i + 2]) * p.b[i];
    if (!(lhs < rhs)) throw ConstructionError("bnplus1", static_cast<long long>(i + 2));
  }
}

ExampleParameters build_parameters(std::int64_t a1, const GrowthPolicy& policy, std::size_t depth) {
  if (a1 < 2) throw DomainError("a_1 must be >= 2");
  if (depth < 1) throw DomainError("depth must be >= 1");
  if (policy.ratio_num <= 0 || policy.ratio_den < 1 || policy.step < 1) throw DomainError("invalid growth policy");
  ExampleParameters p;
  std::int64_t a = a1;
  for (std::size_t n = 1; n <= depth; ++n) {
    const std::int64_t b = checked(static_cast<i128>(a) * policy.ratio_num / policy.ratio_den, "b_n");
    p.a.push_back(a);
    p.b.push_back(b);
    if (n < depth)
      a = checked(static_cast<i128>(policy.step) * (policy.step_grows ? static_cast<i128>(n) : 1) * b, "a_n");
  }
  validate_parameters(p);
  return p;
}

// ---------------------------------------------------------------------------
// sets

const ExampleBlock& ExampleSets::block(std::int64_t n) const {
  if (n < 1 || static_cast<std::size_t>(n) > blocks.size())
    throw DomainError("block " + std::to_string(n) + " outside 1.." + std::to_string(blocks.size()));
  return blocks[static_cast<std::size_t>(n - 1)];
}

ParityRun parity_run(Interval iv, int parity) {
  return {first_of_parity(iv.lo, parity), last_of_parity(iv.hi, parity)};
}

std::vector<ParityRun> a_pieces(const ExampleBlock& blk) { return {parity_run(blk.I, 0), parity_run(blk.J, 1)}; }

ParityRun b_piece(const ExampleBlock& blk) { return parity_run(blk.F, 0); }

ParityRun run_sum(ParityRun x, ParityRun y) {
  if (x.empty() || y.empty()) return {};
  return {x.first + y.first, x.last + y.last};
}

ExampleSets build_sets(const ExampleParameters& params) {
  validate_parameters(params);
  const std::int64_t lo = params.a.front(), hi = params.b.back();
  check_cap(static_cast<std::uint64_t>(hi - lo + 1));
  Bitset a(static_cast<std::size_t>(hi - lo + 1)), b(a.size());
  std::vector<ExampleBlock> blocks;
  for (std::size_t i = 0; i < params.depth(); ++i) {
    ExampleBlock blk;
    blk.n = static_cast<std::int64_t>(i + 1);
    blk.q = (params.b[i] - params.a[i]) / 2;
    blk.F = {params.a[i], params.b[i]};
    blk.I = {params.a[i], params.a[i] + blk.q};
    blk.J = {params.a[i] + blk.q + 1, params.b[i]};
    for (const auto& r : a_pieces(blk))
      for (std::int64_t x = r.first; x <= r.last; x += 2) a.set(static_cast<std::size_t>(x - lo));
    const auto r = b_piece(blk);
    for (std::int64_t x = r.first; x <= r.last; x += 2) b.set(static_cast<std::size_t>(x - lo));
    blocks.push_back(blk);
  }
  return ExampleSets{params, std::move(blocks), WindowSet(lo, hi, std::move(a)), WindowSet(lo, hi, std::move(b))};
}

// ---------------------------------------------------------------------------
// localization

WindowSet sumset_on_block(const ExampleSets& sets, std::int64_t n) {
  const auto& F = sets.block(n).F;
  check_cap(F.size());
  // later blocks overshoot: min A_{n+1} + min B > b_n, and A, B only grow from there
  if (static_cast<std::size_t>(n) < sets.blocks.size()) {
    const auto next = a_pieces(sets.block(n + 1));
    const std::int64_t min_a = std::min(next[0].empty() ? INT64_MAX : next[0].first, next[1].empty() ? INT64_MAX : next[1].first);
    const std::int64_t min_b = b_piece(sets.blocks.front()).first;
    if (!(static_cast<i128>(min_a) + min_b > F.hi)) throw ConstructionError("anplus1", n);
  }
  return WindowSet(F.lo, F.hi, block_sumset(sets, n, [](std::int64_t, std::int64_t) { return true; }));
}

LocalizationReport verify_sumset_localization(const ExampleSets& sets, std::int64_t n) {
  const auto& blk = sets.block(n);
  const auto sum = sumset_on_block(sets, n);
  BlockCover own(blk.F);
  for (const auto& r : a_pieces(blk)) own.add(r);
  const Bitset an = own.bits();

  LocalizationReport rep;
  rep.n = n;
  rep.block_size = blk.F.size();
  rep.sumset_count = sum.cardinality();
  const auto sw = sum.members().words(), aw = an.words();
  for (std::size_t i = 0; i < sw.size(); ++i) rep.sym_diff += static_cast<std::uint64_t>(std::popcount(sw[i] ^ aw[i]));
  const double size = static_cast<double>(rep.block_size);
  rep.defect = static_cast<double>(rep.sym_diff) / size;
  rep.sumset_density = static_cast<double>(rep.sumset_count) / size;
  rep.a_density = static_cast<double>(an.count()) / size;
  rep.cross_coverage =
      static_cast<double>(block_sumset(sets, n, [n](std::int64_t m, std::int64_t mp) { return m < n && mp == n; }).count()) / size;
  rep.shifted_coverage =
      static_cast<double>(block_sumset(sets, n, [n](std::int64_t m, std::int64_t mp) { return m == n && mp < n; }).count()) / size;

  const auto share = [&](Interval iv, int parity) {
    const auto r = parity_run(iv, parity);
    std::uint64_t c = 0;
    for (std::int64_t x = r.first; x <= r.last; x += 2) c += sum.members().test(static_cast<std::size_t>(x - blk.F.lo));
    return static_cast<double>(c) / static_cast<double>(iv.size());
  };
  rep.i_even_share = share(blk.I, 0);
  rep.j_odd_share = share(blk.J, 1);
  return rep;
}

// ---------------------------------------------------------------------------
// trigonometric polynomials

namespace {

double parse_real(std::string_view s, const char* what) {
  s = trim(s);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw DomainError(std::string("expected a number for ") + what + ", got '" + std::string(s) + "'");
  return v;
}

using TermMap = std::map<std::pair<std::int64_t, std::int64_t>, std::complex<double>>;  // (den, num) -> coeff

void collect(std::string_view text, std::complex<double> scale, TermMap& out) {
  auto [name, args] = split_call(text);
  if (name == "const") {
    expect_args(name, args, 1, 2);
    out[{1, 0}] += scale * std::complex<double>(parse_real(args[0], "const"), args.size() == 2 ? parse_real(args[1], "const") : 0.0);
  } else if (name == "char") {
    expect_args(name, args, 1, 1);
    const auto f = Frequency::parse(args[0]);
    if (!f.exact()) throw DomainError("phi needs rational frequencies for an exact mean, got char(" + std::string(trim(args[0])) + ")");
    out[{f.den(), f.num()}] += scale;
  } else if (name == "sum") {
    expect_args(name, args, 1, 1u << 20);
    for (auto a : args) collect(a, scale, out);
  } else if (name == "scale") {
    expect_args(name, args, 2, 2);
    collect(args[1], scale * parse_real(args[0], "scale"), out);
  } else {
    throw DomainError("phi accepts const | char | sum | scale, got '" + name + "'");
  }
}

}  // namespace

TrigPolynomial TrigPolynomial::parse(std::string_view text) {
  TermMap m;
  collect(text, 1.0, m);
  TrigPolynomial p;
  p.text_ = std::string(trim(text));
  for (const auto& [key, c] : m) p.terms_.push_back({Frequency::rational(key.second, key.first), c});
  return p;
}

std::complex<double> TrigPolynomial::mean() const {
  for (const auto& t : terms_)
    if (t.theta.trivial()) return t.coeff;
  return 0;
}

std::complex<double> TrigPolynomial::operator()(std::int64_t x) const {
  std::complex<double> s{};
  for (const auto& t : terms_) s += t.coeff * t.theta(x);
  return s;
}

ObstructionReport verify_half_obstruction(const ExampleSets& sets, const TrigPolynomial& phi, std::int64_t n) {
  const auto sum = sumset_on_block(sets, n);
  // phi is periodic mod lcm of denominators: tally A+B by residue, then weight
  std::int64_t period = 1;
  for (const auto& t : phi.terms()) {
    period = std::lcm(period, t.theta.den());
    if (period > (1 << 20)) break;
  }
  ObstructionReport rep;
  rep.n = n;
  const auto& bits = sum.members();
  std::complex<double> total{};
  if (period <= (1 << 20)) {
    std::vector<std::uint64_t> tally(static_cast<std::size_t>(period), 0);
    for (std::size_t i = bits.find_first(); i != Bitset::npos; i = bits.find_next(i + 1)) {
      std::int64_t r = (sum.lo() + static_cast<std::int64_t>(i)) % period;
      if (r < 0) r += period;
      ++tally[static_cast<std::size_t>(r)];
    }
    for (std::int64_t r = 0; r < period; ++r)
      if (tally[static_cast<std::size_t>(r)]) total += phi(r) * static_cast<double>(tally[static_cast<std::size_t>(r)]);
  } else {
    total = kernels::parallel::chunked_sum(bits.size(), [&](std::size_t i) {
      return bits.test(i) ? phi(sum.lo() + static_cast<std::int64_t>(i)) : std::complex<double>{};
    });
  }
  rep.lhs = total / static_cast<double>(sum.length());
  rep.rhs = phi.mean() / 2.0;
  rep.gap = std::abs(rep.lhs - rep.rhs);
  return rep;
}

std::vector<BlockReport> example_report(const ExampleSets& sets, const std::vector<TrigPolynomial>& phis) {
  const auto N = static_cast<std::int64_t>(sets.blocks.size());
  std::vector<BlockReport> out(static_cast<std::size_t>(N));
  std::vector<std::exception_ptr> errs(out.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t n = 1; n <= N; ++n) {
    try {
      auto& r = out[static_cast<std::size_t>(n - 1)];
      r.localization = verify_sumset_localization(sets, n);
      for (const auto& phi : phis) r.obstruction.push_back(verify_half_obstruction(sets, phi, n));
    } catch (...) {
      errs[static_cast<std::size_t>(n - 1)] = std::current_exception();
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

BohrObstructionScan bohr_obstruction_scan(const ExampleSets& sets, std::int64_t n, const PiecewiseBohrOptions& options) {
  BohrObstructionScan scan;
  scan.n = n;
  for (auto& c : piecewise_bohr_scan(sumset_on_block(sets, n), options)) {
    if (c.spec.rank() != 1) continue;
    scan.min_defect = std::min(scan.min_defect, c.defect);
    scan.candidates.push_back(std::move(c));
  }
  return scan;
}

}  // namespace sumset
