#include "sumsetlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>

#include "sumsetlab/bohr_structure.hpp"
#include "sumsetlab/cli_reports.hpp"
#include "sumsetlab/counterexample_lab.hpp"
#include "sumsetlab/harmonic_means.hpp"
#include "sumsetlab/spectral.hpp"
#include "sumsetlab/sumset_lab.hpp"

namespace sumset {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fix(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

GroupFunction random_function(const FiniteAbelianGroup& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GroupFunction f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = {u(rng), u(rng)};
  return f;
}

std::vector<std::int64_t> random_residues(std::int64_t q, std::mt19937_64& rng) {
  std::vector<std::int64_t> r;
  for (std::int64_t x = 0; x < q; ++x)
    if (rng() & 1) r.push_back(x);
  if (r.empty()) r.push_back(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q)));
  return r;
}

std::string mod_rule(std::int64_t q, const std::vector<std::int64_t>& residues) {
  std::string s = "mod(" + std::to_string(q);
  for (auto r : residues) s += ", " + std::to_string(r);
  return s + ")";
}

// 1: FFT convolution against the direct sum, with Parseval and the expansion identity.
CriterionResult convolution(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double conv = 0, pars = 0, expn = 0;
  for (const char* lit : {"Z12", "Z2xZ3xZ5", "Z64"}) {
    const auto g = FiniteAbelianGroup::parse(lit);
    for (int i = 0; i < 200; ++i) {
      const auto f = random_function(g, rng), h = random_function(g, rng);
      conv = std::max(conv, sup_distance(convolve(f, h), convolve_direct(f, h)));
      pars = std::max(pars, parseval_check(f, h));
      expn = std::max(expn, convolution_expansion_check(f, h));
    }
  }
  return {1, "convolution", conv <= 1e-9 && pars <= 1e-9 && expn <= 1e-9,
          "600 pairs; sup |fft - direct| = " + sci(conv) + ", parseval " + sci(pars) + ", expansion " + sci(expn)};
}

// 2: the half-threshold level set of 1_A * 1_B is exactly A + B.
CriterionResult steinhaus(std::uint64_t seed) {
  std::uint64_t pairs = 0, mismatches = 0;
  std::string first;
  auto tally = [&](const SteinhausScanReport& r) {
    pairs += r.pairs;
    mismatches += r.mismatches;
    if (first.empty() && r.first_mismatch) first = r.group + " A=" + r.first_mismatch->a + " B=" + r.first_mismatch->b;
  };
  for (std::uint32_t n = 1; n <= 12; ++n) tally(steinhaus_exhaustive(FiniteAbelianGroup({n})));
  std::vector<FiniteAbelianGroup> groups;
  for (std::uint32_t n : {13u, 16u, 30u, 64u, 97u, 128u, 144u, 210u, 243u, 256u})
    for (auto& g : abelian_groups_of_order(n)) groups.push_back(std::move(g));
  const std::uint64_t total = 10000, per = total / groups.size();
  for (std::size_t i = 0; i < groups.size(); ++i)
    tally(steinhaus_random(groups[i], per + (i == 0 ? total - per * groups.size() : 0), seed + i));
  return {2, "steinhaus level set", mismatches == 0,
          std::to_string(pairs) + " pairs over " + std::to_string(12 + groups.size()) + " groups, " +
              std::to_string(mismatches) + " mismatches" + (first.empty() ? "" : "; first " + first)};
}

// 3: small sumsets have a nontrivial stabilizer.
CriterionResult kneser() {
  std::uint64_t pairs = 0, small = 0, trivial = 0, strict_trivial = 0, periodic_bad = 0, ineq_bad = 0;
  std::size_t groups = 0;
  std::string first;
  for (std::uint32_t n = 1; n <= 18; ++n)
    for (const auto& g : abelian_groups_of_order(n)) {
      ++groups;
      const auto r = kneser_exhaustive(g);
      pairs += r.pairs, small += r.small_pairs, trivial += r.trivial_small, strict_trivial += r.strict_trivial;
      periodic_bad += r.periodicity_violations, ineq_bad += r.inequality_violations;
      if (first.empty() && r.first_trivial_small)
        first = r.group + " A=" + r.first_trivial_small->a + " B=" + r.first_trivial_small->b;
    }
  const bool pass = trivial == 0 && periodic_bad == 0 && ineq_bad == 0;
  return {3, "kneser stabilizer", pass,
          std::to_string(groups) + " groups, " + std::to_string(pairs) + " pairs, " + std::to_string(small) +
              " with |A+B| < |A|+|B|, " + std::to_string(trivial) + " of them with trivial stabilizer (" +
              std::to_string(strict_trivial) + " with |A+B| <= |A|+|B|-2); periodicity violations " +
              std::to_string(periodic_bad) + ", inequality violations " + std::to_string(ineq_bad) +
              (first.empty() ? "" : "; first " + first)};
}

// 4: |A| + |B| > |G| forces A + B = G.
CriterionResult pigeonhole() {
  std::uint64_t pairs = 0, forced = 0, bad = 0;
  std::size_t groups = 0;
  for (std::uint32_t n = 1; n <= 16; ++n)
    for (const auto& g : abelian_groups_of_order(n)) {
      ++groups;
      const auto r = pigeonhole_exhaustive(g);
      pairs += r.pairs, forced += r.forced_pairs, bad += r.violations;
    }
  return {4, "pigeonhole", bad == 0,
          std::to_string(groups) + " groups, " + std::to_string(pairs) + " pairs, " + std::to_string(forced) + " forced, " +
              std::to_string(bad) + " violations"};
}

// 5: spectral measure of matrix coefficients, and polarization.
CriterionResult bochner(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double b = 0, p = 0;
  for (const char* lit : {"Z9", "Z2xZ8"}) {
    const auto g = FiniteAbelianGroup::parse(lit);
    for (int i = 0; i < 500; ++i) {
      const auto v = random_function(g, rng), w = random_function(g, rng);
      b = std::max(b, bochner_check(w));
      p = std::max(p, polarization_check(v, w));
    }
  }
  return {5, "bochner and polarization", b <= 1e-9 && p <= 1e-9,
          "1000 vectors; bochner " + sci(b) + ", polarization " + sci(p)};
}

// 6: Bohr sets meet the (floor(1/eps) + 1)^-d density bound.
CriterionResult bohr_density() {
  const std::vector<std::string> thetas{"0.6180339887498949", "0.4142135623730951", "0.7320508075688772",
                                        "0.7182818284590452", "0.14159265358979312", "1/3", "2/7", "5/12", "1/2", "3/10"};
  const double eps[] = {0.05, 0.1, 0.25};
  std::vector<BohrSpec> fixture;
  for (std::size_t i = 0; i < thetas.size(); ++i) fixture.push_back({{Frequency::parse(thetas[i])}, eps[i % 3], 0});
  for (std::size_t i = 0; i < thetas.size(); ++i)
    fixture.push_back({{Frequency::parse(thetas[i]), Frequency::parse(thetas[(i + 3) % thetas.size()])}, eps[(i + 1) % 3], 0});

  int bad = 0, small = 0;
  double worst = INFINITY;
  std::string worst_spec;
  for (const auto& s : fixture) {
    const double need = std::pow(10.0 / s.eps, static_cast<double>(s.rank()));
    const auto size = static_cast<std::int64_t>(std::max(std::ceil(need), 10000.0));
    const auto r = bohr_density_bound_check(s, {0, size - 1});
    bad += r.violation;
    small += !r.window_large_enough;
    if (r.density / r.bound < worst) worst = r.density / r.bound, worst_spec = s.text();
  }
  return {6, "bohr density bound", bad == 0 && small == 0,
          std::to_string(fixture.size()) + " specs, " + std::to_string(bad) + " below 0.9 bound; smallest density/bound " +
              fix(worst) + " at " + worst_spec};
}

// 7: Weyl averages of floor(n^2.5) decay; for a_n = n at 1/2 they are at most 1/N.
CriterionResult weyl() {
  const auto seq = HartmanSequence::parse("pow(2.5)");
  int bad = 0;
  double worst = 0;
  for (int k = 1; k <= 10; ++k) {
    const auto theta = Frequency::parse(k == 10 ? "0.41421356" : "0." + std::to_string(k));
    const double small = std::abs(weyl_average(seq, theta, 1000));
    const double big = std::abs(weyl_average(seq, theta, 1000000));
    worst = std::max(worst, big);
    bad += !(big < small && big < 0.1);
  }
  const auto id = HartmanSequence::identity();
  const auto half = Frequency::rational(1, 2);
  int id_bad = 0;
  for (std::uint64_t n : {999ull, 1000ull, 1000001ull}) id_bad += std::abs(weyl_average(id, half, n)) > 1.0 / static_cast<double>(n);
  return {7, "weyl decay", bad == 0 && id_bad == 0,
          "pow(2.5) at 10 frequencies: " + std::to_string(bad) + " failures, largest |avg(1e6)| " + sci(worst) +
              "; identity at 1/2: " + std::to_string(id_bad) + " failures"};
}

// 8: periodic indicators are recovered from their rational grid.
CriterionResult brn(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int c = 0; c < 50; ++c) {
    const auto q = static_cast<std::int64_t>(1 + rng() % 24);
    const auto rule = SetRule::parse(mod_rule(q, random_residues(q, rng)));
    const auto f = FunctionRule::indicator(rule);
    const auto m = MeanApproximator::folner(FolnerFamily::parse("initial"), static_cast<std::uint64_t>(2 * q * 500));
    const auto approx = brn_reconstruct(f, m, rational_grid(q));
    for (std::int64_t x = 0; x < 10000; ++x) worst = std::max(worst, std::abs(approx.evaluate(x) - f(x)));
  }
  return {8, "brn reconstruction", worst <= 1e-9, "50 indicators, sup error " + sci(worst)};
}

// 9: the block example, up to the last block with |F_n| <= 2^24.
CriterionResult counterexample() {
  std::size_t depth = 1;
  while (true) {
    const auto p = build_parameters(10, GrowthPolicy{}, depth + 1);
    if (p.b.back() - p.a.back() + 1 > (1 << 24)) break;
    ++depth;
  }
  const auto sets = build_sets(build_parameters(10, GrowthPolicy{}, depth));
  const auto n = static_cast<std::int64_t>(depth);
  const auto loc = verify_sumset_localization(sets, n);
  const auto scan = bohr_obstruction_scan(sets, n, PiecewiseBohrOptions{});
  const bool pass = loc.defect <= 0.05 && std::abs(loc.sumset_density - 0.5) <= 0.02 && scan.min_defect >= 0.4;
  return {9, "counterexample obstruction", pass,
          "block " + std::to_string(n) + " |F_n| = " + std::to_string(loc.block_size) + ": defect " + fix(loc.defect) +
              " (<= 0.05), density " + fix(loc.sumset_density) + " (1/2 +- 0.02), cross-block coverage " +
              fix(loc.cross_coverage) + ", smallest rank-1 Bohr defect " + fix(scan.min_defect) + " over " +
              std::to_string(scan.candidates.size()) + " candidates (>= 0.4)"};
}

// 10: {h >= delta} sits inside A + B on a long window.
CriterionResult level_set(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int c = 0; c < 20; ++c) {
    const auto qa = static_cast<std::int64_t>(1 + rng() % 12), qb = static_cast<std::int64_t>(1 + rng() % 12);
    const auto ra = random_residues(qa, rng), rb = random_residues(qb, rng);
    const auto L = std::lcm(qa, qb);
    // exact h(x) = #{y mod L : y in A, x - y in B} / L
    std::int64_t min_pos = L + 1;
    for (std::int64_t x = 0; x < L; ++x) {
      std::int64_t cnt = 0;
      for (std::int64_t y = 0; y < L; ++y)
        cnt += std::count(ra.begin(), ra.end(), y % qa) && std::count(rb.begin(), rb.end(), ((x - y) % qb + qb) % qb);
      if (cnt > 0) min_pos = std::min(min_pos, cnt);
    }
    const double delta = static_cast<double>(min_pos) / static_cast<double>(L) / 2;
    const auto m = MeanApproximator::folner(FolnerFamily::parse("initial"), static_cast<std::uint64_t>(2 * L * 100));
    const auto r = convolution_expansion_on_Z(SetRule::parse(mod_rule(qa, ra)), SetRule::parse(mod_rule(qb, rb)), m, m,
                                              rational_grid(L), delta, {0, 999999});
    worst = std::max(worst, r.defect_density);
  }
  return {10, "level set inside sumset", worst <= 1e-3, "20 pairs, largest defect density " + sci(worst)};
}

}  // namespace

std::string format_result_line(const CriterionResult& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + (r.id < 10 ? "   " : "  ") + std::to_string(r.id) + "  " + r.name + ": " +
         r.detail + buf;
}

std::vector<CriterionResult> run_criteria(const AcceptanceOptions& options) {
  const std::uint64_t s = options.seed;
  const std::vector<std::pair<int, std::function<CriterionResult()>>> list{
      {1, [s] { return convolution(s); }},
      {2, [s] { return steinhaus(s + 1); }},
      {3, [] { return kneser(); }},
      {4, [] { return pigeonhole(); }},
      {5, [s] { return bochner(s + 2); }},
      {6, [] { return bohr_density(); }},
      {7, [] { return weyl(); }},
      {8, [s] { return brn(s + 3); }},
      {9, [] { return counterexample(); }},
      {10, [s] { return level_set(s + 4); }},
  };
  std::vector<CriterionResult> out;
  for (const auto& [id, run] : list) {
    if (!options.only.empty() && !options.only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (options.on_result) options.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string acceptance_csv(const std::vector<CriterionResult>& results) {
  CsvTable t;
  t.header = {"id", "name", "pass", "detail"};
  for (const auto& r : results) t.add_row({std::to_string(r.id), r.name, r.pass ? "true" : "false", r.detail});
  return t.str();
}

std::string acceptance_json(const std::vector<CriterionResult>& results) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) j.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  return nlohmann::json{{"criteria", j}, {"version", kLibraryVersion}}.dump(2) + "\n";
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  AcceptanceOptions base = options;
  base.only.erase(11);
  const bool want_repeat = options.only.empty() || options.only.count(11);
  const bool repeat_only = !options.only.empty() && base.only.empty();
  if (repeat_only) base.on_result = nullptr;  // 11 alone still needs the full list to compare

  auto results = run_criteria(base);
  const auto csv = acceptance_csv(results), json = acceptance_json(results);
  if (!options.out_dir.empty()) {
    write_text_file(options.out_dir + "/acceptance.csv", csv);
    write_text_file(options.out_dir + "/acceptance.json", json);
  }
  if (repeat_only) results.clear();
  if (want_repeat) {
    const auto t0 = std::chrono::steady_clock::now();
    AcceptanceOptions again = base;
    again.on_result = nullptr;
    const auto second = run_criteria(again);
    const bool same = acceptance_csv(second) == csv && acceptance_json(second) == json;
    CriterionResult r{11, "determinism", same,
                      same ? "two runs gave byte-identical CSV and JSON" : "the second run changed the CSV or JSON artifacts"};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (options.on_result) options.on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace sumset
