#include "sumsetlab/bohr_structure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rule_text.hpp"
#include "sumsetlab/error.hpp"

namespace sumset {

using detail::parse_int;
using detail::trim;

double torus_norm(long double phase) {
  const long double f = phase - std::floor(phase);
  return static_cast<double>(std::min(f, 1 - f));
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_eps(std::string_view s) {
  s = trim(s);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw DomainError("bad eps '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

double norm_at(const BohrSpec& spec, std::int64_t x) {
  double n = 0;
  for (const auto& th : spec.thetas) n = std::max(n, torus_norm(th.phase(x - spec.center)));
  return n;
}

}  // namespace

BohrSpec BohrSpec::parse(std::string_view text) {
  auto s = trim(text);
  if (s.substr(0, 5) != "bohr(" || s.back() != ')') throw DomainError("Bohr spec must look like bohr(d=..; theta=..; eps=..; center=..)");
  BohrSpec spec;
  std::optional<std::int64_t> d;
  bool have_eps = false;
  for (auto field : split(s.substr(5, s.size() - 6), ';')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw DomainError("Bohr spec field without '=': " + std::string(field));
    const auto key = trim(field.substr(0, eq));
    const auto val = trim(field.substr(eq + 1));
    if (key == "d") {
      d = parse_int(val, "d");
    } else if (key == "theta") {
      for (auto t : split(val, ','))
        if (!t.empty()) spec.thetas.push_back(Frequency::parse(t));
    } else if (key == "eps") {
      spec.eps = parse_eps(val);
      have_eps = true;
    } else if (key == "center") {
      spec.center = parse_int(val, "center");
    } else {
      throw DomainError("unknown Bohr spec field '" + std::string(key) + "'");
    }
  }
  if (d && *d != static_cast<std::int64_t>(spec.thetas.size()))
    throw DomainError("Bohr spec has d=" + std::to_string(*d) + " but " + std::to_string(spec.thetas.size()) + " thetas");
  if (!have_eps && spec.rank() > 0) throw DomainError("Bohr spec needs eps");
  spec.validate();
  return spec;
}

std::string BohrSpec::text() const {
  std::string t = "bohr(d=" + std::to_string(rank());
  if (!thetas.empty()) {
    t += "; theta=";
    for (std::size_t i = 0; i < thetas.size(); ++i) t += (i ? "," : "") + thetas[i].text();
  }
  return t + "; eps=" + shortest(eps) + "; center=" + std::to_string(center) + ")";
}

void BohrSpec::validate() const {
  if (!(eps > 0 && eps <= 0.5)) throw DomainError("Bohr radius must lie in (0, 1/2], got " + shortest(eps));
}

BohrMembership bohr_membership(const BohrSpec& spec, std::int64_t x) {
  BohrMembership m;
  m.norm = norm_at(spec, x);
  m.margin = spec.eps - m.norm;
  m.member = m.norm < spec.eps;
  return m;
}

WindowSet bohr_window(const BohrSpec& spec, std::int64_t lo, std::int64_t hi) {
  spec.validate();
  if (lo > hi) throw DomainError("window needs lo <= hi");
  const std::uint64_t len = static_cast<std::uint64_t>(hi - lo) + 1;
  if (len > window_cap_bits())
    throw CapacityError("window of " + std::to_string(len) + " bits exceeds the cap of " + std::to_string(window_cap_bits()));
  Bitset bits(static_cast<std::size_t>(len));
  auto words = bits.words();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t w = 0; w < static_cast<std::ptrdiff_t>(words.size()); ++w) {
    std::uint64_t v = 0;
    const std::size_t base = static_cast<std::size_t>(w) * 64;
    for (std::size_t b = 0; b < 64 && base + b < len; ++b)
      if (norm_at(spec, lo + static_cast<std::int64_t>(base + b)) < spec.eps) v |= std::uint64_t{1} << b;
    words[static_cast<std::size_t>(w)] = v;
  }
  return WindowSet(lo, hi, std::move(bits));
}

double bohr_density_bound(double eps, std::size_t rank) {
  return std::pow(std::floor(1 / eps) + 1, -static_cast<double>(rank));
}

BohrDensityReport bohr_density_bound_check(const BohrSpec& spec, Interval window) {
  const auto w = bohr_window(spec, window.lo, window.hi);
  BohrDensityReport r;
  r.count = w.cardinality();
  r.size = w.length();
  r.density = static_cast<double>(r.count) / static_cast<double>(r.size);
  r.bound = bohr_density_bound(spec.eps, spec.rank());
  r.window_large_enough = static_cast<double>(r.size) >= std::pow(10 / spec.eps, static_cast<double>(spec.rank()));
  r.violation = r.density < 0.9 * r.bound;
  return r;
}

BohrEmbeddingReport bohr_embeddability(const BohrSpec& spec, Interval probe_window, const WindowSet& target,
                                       std::size_t k, EmbeddingOptions options) {
  options.stop_on_failure = false;
  BohrEmbeddingReport r;
  r.search = finite_embeddability(bohr_window(spec, probe_window.lo, probe_window.hi), target, k, options);
  r.success_rate = r.search.probes ? 1 - static_cast<double>(r.search.failures) / static_cast<double>(r.search.probes) : 1;
  return r;
}

std::vector<SeedFrequency> seed_frequencies(const WindowSet& target, std::int64_t max_denominator, std::size_t count) {
  std::vector<SeedFrequency> seeds;
  const double size = static_cast<double>(target.length());
  const auto& bits = target.members();
  for (std::int64_t q = 2; q <= max_denominator; ++q) {
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(q), 0);
    const std::int64_t base = ((target.lo() % q) + q) % q;
    for (auto i = bits.find_first(); i != Bitset::npos; i = bits.find_next(i + 1))
      ++hist[static_cast<std::size_t>((base + static_cast<std::int64_t>(i % static_cast<std::size_t>(q))) % q)];
    for (std::int64_t j = 1; j < q; ++j) {
      if (std::gcd(j, q) != 1) continue;
      std::complex<double> c{};
      for (std::int64_t r = 0; r < q; ++r) {
        const double a = -2 * std::numbers::pi * static_cast<double>(j * r % q) / static_cast<double>(q);
        c += static_cast<double>(hist[static_cast<std::size_t>(r)]) * std::complex<double>(std::cos(a), std::sin(a));
      }
      const double mag = std::abs(c) / size;
      if (mag > 1e-9) seeds.push_back({Frequency::rational(j, q), mag});
    }
  }
  // magnitudes agreeing to 1e-12 count as ties and keep (q, j) order, so rounding cannot reorder them
  std::stable_sort(seeds.begin(), seeds.end(), [](const SeedFrequency& a, const SeedFrequency& b) {
    return std::llround(a.magnitude * 1e12) > std::llround(b.magnitude * 1e12);
  });
  if (seeds.size() > count) seeds.resize(count);
  return seeds;
}

namespace {

/// Best [t, t + L) for membership bits `b` against the target: highest contained / points.
BohrCandidate best_run(const Bitset& b, const Bitset& target, std::int64_t lo, std::size_t L) {
  const std::size_t len = b.size();
  std::uint64_t pts = 0, in = 0;
  for (std::size_t i = 0; i < L; ++i)
    if (b.test(i)) ++pts, in += target.test(i);
  std::uint64_t best_pts = pts, best_in = in;
  std::size_t best_t = 0;
  auto better = [&](std::uint64_t p, std::uint64_t c) {
    if ((p > 0) != (best_pts > 0)) return p > 0;
    const auto lhs = static_cast<unsigned __int128>(c) * best_pts, rhs = static_cast<unsigned __int128>(best_in) * p;
    if (lhs != rhs) return lhs > rhs;
    return p > best_pts;
  };
  for (std::size_t t = 1; t + L <= len; ++t) {
    if (b.test(t - 1)) --pts, in -= target.test(t - 1);
    if (b.test(t + L - 1)) ++pts, in += target.test(t + L - 1);
    if (better(pts, in)) best_pts = pts, best_in = in, best_t = t;
  }
  BohrCandidate c;
  c.run = {lo + static_cast<std::int64_t>(best_t), lo + static_cast<std::int64_t>(best_t + L) - 1};
  c.bohr_points = best_pts;
  c.contained = best_in;
  c.containment = best_pts ? static_cast<double>(best_in) / static_cast<double>(best_pts) : 1.0;
  c.defect = 1 - c.containment;
  return c;
}

}  // namespace

std::vector<BohrCandidate> piecewise_bohr_scan(const WindowSet& target, const PiecewiseBohrOptions& options) {
  if (options.eps_grid.empty()) throw DomainError("empty eps grid");
  for (double e : options.eps_grid)
    if (!(e > 0 && e <= 0.5)) throw DomainError("eps grid values must lie in (0, 1/2]");
  if (options.center_count < 1) throw DomainError("center count must be >= 1");
  const std::size_t len = target.length();
  const std::size_t L = options.run_length ? static_cast<std::size_t>(options.run_length) : len;
  if (L > len) throw DomainError("run length exceeds the window");

  if (options.rank_cap > 0 && options.theta_grid.empty() && options.seed_count == 0)
    throw DomainError("empty theta grid and no seeds requested");
  // a target with no nonzero coefficient leaves only rank 0
  std::vector<Frequency> pool = options.theta_grid;
  for (const auto& s : seed_frequencies(target, options.seed_max_denominator, options.seed_count))
    if (std::find(pool.begin(), pool.end(), s.theta) == pool.end()) pool.push_back(s.theta);


  std::vector<std::vector<Frequency>> tuples;
  if (options.rank_cap >= 1)
    for (const auto& t : pool) tuples.push_back({t});
  if (options.rank_cap >= 2)
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j) tuples.push_back({pool[i], pool[j]});
  if (options.rank_cap > 2) throw DomainError("piecewise Bohr scans support rank at most 2");

  const auto& tbits = target.members();
  std::vector<BohrCandidate> out;
  {
    Bitset all(len);
    all.set_all();
    auto c = best_run(all, tbits, target.lo(), L);
    c.spec = BohrSpec{};
    out.push_back(c);
  }
  std::vector<double> norms(len);
  Bitset member(len);
  for (const auto& thetas : tuples) {
    for (std::int64_t center = 0; center < options.center_count; ++center) {
      BohrSpec spec{thetas, 0.5, center};
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(len); ++i)
        norms[static_cast<std::size_t>(i)] = norm_at(spec, target.lo() + i);
      for (double eps : options.eps_grid) {
        member.clear();
        for (std::size_t i = 0; i < len; ++i)
          if (norms[i] < eps) member.set(i);
        auto c = best_run(member, tbits, target.lo(), L);
        spec.eps = eps;
        c.spec = spec;
        out.push_back(c);
      }
    }
  }
  std::vector<std::string> keys;
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  for (const auto& c : out) keys.push_back(c.spec.text());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = out[a];
    const auto& y = out[b];
    // containment as an exact fraction; an empty run counts as 1/1
    const auto num = [](const BohrCandidate& c) { return c.bohr_points ? c.contained : 1; };
    const auto den = [](const BohrCandidate& c) { return c.bohr_points ? c.bohr_points : 1; };
    const auto lhs = static_cast<unsigned __int128>(num(x)) * den(y);
    const auto rhs = static_cast<unsigned __int128>(num(y)) * den(x);
    if (lhs != rhs) return lhs > rhs;
    if (x.spec.eps != y.spec.eps) return x.spec.eps > y.spec.eps;
    return keys[a] < keys[b];
  });
  std::vector<BohrCandidate> ranked;
  ranked.reserve(out.size());
  for (auto i : order) ranked.push_back(std::move(out[i]));
  return ranked;
}

}  // namespace sumset
