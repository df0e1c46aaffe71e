#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sumsetlab/acceptance.hpp"
#include "sumsetlab/bohr_structure.hpp"
#include "sumsetlab/cli_reports.hpp"
#include "sumsetlab/counterexample_lab.hpp"
#include "sumsetlab/error.hpp"
#include "sumsetlab/harmonic_means.hpp"
#include "sumsetlab/kernels.hpp"
#include "sumsetlab/spectral.hpp"
#include "sumsetlab/sumset_lab.hpp"

namespace sumset {

namespace {

struct Flag {
  std::string name, fallback, help;
};

struct Outcome {
  RunReport report;
  std::vector<Series> plot;
  PlotStyle style;
};

using Runner = std::function<Outcome(const ExperimentConfig&)>;

struct Command {
  std::string group, name, help;
  std::vector<Flag> flags;
  Runner run;
};

// typed reads of normalized parameters

const std::string& param(const ExperimentConfig& c, const std::string& k) {
  auto it = c.params.find(k);
  if (it == c.params.end()) throw DomainError("missing parameter --" + k);
  return it->second;
}

std::int64_t param_int(const ExperimentConfig& c, const std::string& k) {
  const auto& s = param(c, k);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError("--" + k + " expects an integer, got '" + s + "'");
  return v;
}

std::uint64_t param_count(const ExperimentConfig& c, const std::string& k) {
  const auto v = param_int(c, k);
  if (v < 0) throw DomainError("--" + k + " must be >= 0");
  return static_cast<std::uint64_t>(v);
}

double to_number(const std::string& s, const std::string& k) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError("--" + k + " expects numbers, got '" + s + "'");
  return v;
}

// "a, b; c" -> {"a", "b", "c"}
std::vector<std::string> param_list(const ExperimentConfig& c, const std::string& k) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : param(c, k)) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && ch == ';') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  std::vector<std::string> trimmed;
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
    if (b != std::string::npos) trimmed.push_back(s.substr(b, e - b + 1));
  }
  return trimmed;
}

Outcome make(const ExperimentConfig& c, std::vector<std::string> header) {
  Outcome o;
  o.report.config = c;
  o.report.table.header = std::move(header);
  return o;
}

MeanApproximator approximator(const ExperimentConfig& c) {
  const auto& kind = param(c, "approx");
  const auto depth = param_count(c, "depth");
  if (kind.rfind("hartman:", 0) == 0) return MeanApproximator::hartman(HartmanSequence::parse(kind.substr(8)), depth);
  return MeanApproximator::folner(FolnerFamily::parse(kind), depth);
}

// ---------------------------------------------------------------------------
// group

Outcome group_dft(const ExperimentConfig& c) {
  const auto g = FiniteAbelianGroup::parse(param(c, "group"));
  const auto a = GroupSubset::parse(g, param(c, "a"));
  const auto s = dft(GroupFunction::indicator(g, a.members()));
  auto o = make(c, {"chi", "character", "re", "im", "abs"});
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto z = s.coefficients[k];
    o.report.table.add_row({std::to_string(k), format_element(GroupElement{g.character(k).coords}), format_double(z.real()),
                            format_double(z.imag()), format_double(std::abs(z))});
  }
  o.report.certificates["energy"] = s.energy();
  return o;
}

Outcome group_convolve(const ExperimentConfig& c) {
  const auto g = FiniteAbelianGroup::parse(param(c, "group"));
  const auto a = GroupSubset::parse(g, param(c, "a")), b = GroupSubset::parse(g, param(c, "b"));
  const auto h = convolve(GroupFunction::indicator(g, a.members()), GroupFunction::indicator(g, b.members()));
  const auto direct = convolve_direct(GroupFunction::indicator(g, a.members()), GroupFunction::indicator(g, b.members()));
  auto o = make(c, {"x", "element", "re", "im"});
  for (std::size_t x = 0; x < g.size(); ++x)
    o.report.table.add_row({std::to_string(x), format_element(g.element(x)), format_double(h(x).real()), format_double(h(x).imag())});
  o.report.certificates["sup_deviation_from_direct"] = sup_distance(h, direct);
  return o;
}

Outcome group_kneser(const ExperimentConfig& c) {
  const auto g = FiniteAbelianGroup::parse(param(c, "group"));
  const auto a = GroupSubset::parse(g, param(c, "a")), b = GroupSubset::parse(g, param(c, "b"));
  const auto k = kneser_certificate(a, b);
  auto o = make(c, {"group", "sumset", "stabilizer", "sum_size", "a_size", "b_size", "h_size", "a_plus_h", "b_plus_h",
                    "periodic", "inequality"});
  const auto h = GroupSubset(g, k.stabilizer.members()).literal();
  o.report.table.add_row({g.literal(), k.sumset.literal(), h, std::to_string(k.sum_size), std::to_string(k.a_size),
                          std::to_string(k.b_size), std::to_string(k.h_size), std::to_string(k.a_plus_h),
                          std::to_string(k.b_plus_h), k.periodic ? "true" : "false", k.satisfied_inequality ? "true" : "false"});
  o.report.certificates["kneser"] = {{"group", g.literal()},
                                     {"A", a.literal()},
                                     {"B", b.literal()},
                                     {"sumset", k.sumset.literal()},
                                     {"H", h},
                                     {"H_order", k.h_size},
                                     {"small_sumset", k.small_sumset},
                                     {"periodic", k.periodic},
                                     {"inequality", k.satisfied_inequality},
                                     {"valid", k.valid()}};
  return o;
}

Outcome group_steinhaus(const ExperimentConfig& c) {
  const auto g = FiniteAbelianGroup::parse(param(c, "group"));
  const auto a = GroupSubset::parse(g, param(c, "a")), b = GroupSubset::parse(g, param(c, "b"));
  const auto level = steinhaus_level_set(a, b);
  const auto sum = sumset::sumset(a, b);
  auto o = make(c, {"group", "level_set", "sumset", "equal", "threshold"});
  o.report.table.add_row({g.literal(), level.literal(), sum.literal(), level == sum ? "true" : "false",
                          format_double(steinhaus_threshold(g))});
  return o;
}

// ---------------------------------------------------------------------------
// density

Outcome density_scan(const ExperimentConfig& c) {
  const auto rule = SetRule::parse(param(c, "rule"));
  const auto fam = FolnerFamily::parse(param(c, "family"));
  const auto n = param_count(c, "depth");
  const auto lo = param_int(c, "lo"), hi = param_int(c, "hi");
  const auto w = WindowSet::from_rule(rule, lo, hi);
  const auto fd = folner_density(w, fam, n);
  const auto len = param_count(c, "length");
  auto o = make(c, {"kind", "value", "count", "size", "witness", "window_lo", "window_hi"});
  auto row = [&](const char* kind, const DensityEstimate& d) {
    o.report.table.add_row({kind, format_double(d.value), std::to_string(d.count), std::to_string(d.size),
                            std::to_string(d.witness), std::to_string(d.window.lo), std::to_string(d.window.hi)});
  };
  row("lower", fd.lower);
  row("upper", fd.upper);
  if (len > 0) row("banach_upper", banach_upper_density(w, len, {lo, hi}));

  // running density along the family for the plot
  Series s{"density along " + fam.text(), {}};
  for (std::uint64_t k = std::max<std::uint64_t>(1, n / 64); k <= n; k += std::max<std::uint64_t>(1, n / 64)) {
    const auto iv = fam.window(k);
    if (!w.covers(iv.lo, iv.hi)) break;
    s.points.emplace_back(static_cast<double>(k), static_cast<double>(w.count(iv.lo, iv.hi)) / static_cast<double>(iv.size()));
  }
  if (!s.points.empty()) o.plot.push_back(std::move(s));
  o.style = {PlotStyle::Kind::line, "Folner density of " + rule.text(), "depth", "density", false};
  return o;
}

Outcome density_classify(const ExperimentConfig& c) {
  const auto rule = SetRule::parse(param(c, "rule"));
  const auto w = WindowSet::from_rule(rule, param_int(c, "lo"), param_int(c, "hi"));
  const auto t = classify_thick(w, param_count(c, "probe"));
  const auto s = classify_syndetic(w, param_count(c, "gap"));
  const auto p = classify_piecewise_syndetic(w, param_count(c, "gap"), param_count(c, "probe"));
  auto o = make(c, {"property", "holds_at_scale", "witness", "measure"});
  o.report.table.add_row({"thick", t.thick_at_scale ? "true" : "false", std::to_string(t.witness),
                          "max_run=" + std::to_string(t.max_run)});
  o.report.table.add_row({"syndetic", s.syndetic_at_scale ? "true" : "false", std::to_string(s.gap_from),
                          "max_gap=" + std::to_string(s.max_gap)});
  o.report.table.add_row({"piecewise_syndetic", p.piecewise_syndetic_at_scale ? "true" : "false", std::to_string(p.witness),
                          "max_run=" + std::to_string(p.max_run)});
  return o;
}

// ---------------------------------------------------------------------------
// bohr

Outcome bohr_window_cmd(const ExperimentConfig& c) {
  const auto spec = BohrSpec::parse(param(c, "spec"));
  const Interval iv{param_int(c, "lo"), param_int(c, "hi")};
  const auto r = bohr_density_bound_check(spec, iv);
  auto o = make(c, {"spec", "count", "size", "density", "bound", "window_large_enough", "violation"});
  o.report.table.add_row({spec.text(), std::to_string(r.count), std::to_string(r.size), format_double(r.density),
                          format_double(r.bound), r.window_large_enough ? "true" : "false", r.violation ? "true" : "false"});

  // density against eps with the bound overlaid
  Series measured{"density", {}}, bound{"bound", {}};
  for (double eps : {0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5}) {
    BohrSpec s = spec;
    s.eps = eps;
    const auto e = bohr_density_bound_check(s, iv);
    measured.points.emplace_back(eps, e.density);
    bound.points.emplace_back(eps, e.bound);
  }
  o.plot = {measured, bound};
  o.style = {PlotStyle::Kind::line, "Bohr density against radius", "eps", "density", false};
  return o;
}

Outcome bohr_scan(const ExperimentConfig& c) {
  const auto target = WindowSet::from_rule(SetRule::parse(param(c, "rule")), param_int(c, "lo"), param_int(c, "hi"));
  PiecewiseBohrOptions opt;
  opt.rank_cap = param_count(c, "rank");
  opt.run_length = param_count(c, "run");
  opt.seed_count = param_count(c, "seeds");
  opt.center_count = param_int(c, "centers");
  opt.eps_grid.clear();
  for (const auto& e : param_list(c, "eps")) opt.eps_grid.push_back(to_number(e, "eps"));
  for (const auto& t : param_list(c, "thetas")) opt.theta_grid.push_back(Frequency::parse(t));
  auto o = make(c, {"spec", "run_lo", "run_hi", "bohr_points", "contained", "containment", "defect"});
  for (const auto& k : piecewise_bohr_scan(target, opt))
    o.report.table.add_row({k.spec.text(), std::to_string(k.run.lo), std::to_string(k.run.hi), std::to_string(k.bohr_points),
                            std::to_string(k.contained), format_double(k.containment), format_double(k.defect)});
  return o;
}

Outcome bohr_embed(const ExperimentConfig& c) {
  const auto spec = BohrSpec::parse(param(c, "spec"));
  const auto target = WindowSet::from_rule(SetRule::parse(param(c, "rule")), param_int(c, "lo"), param_int(c, "hi"));
  EmbeddingOptions opt;
  opt.seed = param_count(c, "seed");
  opt.samples = param_count(c, "samples");
  const auto r = bohr_embeddability(spec, {param_int(c, "probe-lo"), param_int(c, "probe-hi")}, target, param_count(c, "k"), opt);
  auto o = make(c, {"spec", "probes", "failures", "success_rate", "exhaustive"});
  o.report.seed = opt.seed;
  o.report.table.add_row({spec.text(), std::to_string(r.search.probes), std::to_string(r.search.failures),
                          format_double(r.success_rate), r.search.exhaustive ? "true" : "false"});
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : r.search.failing_probes) fails.push_back(f);
  o.report.certificates["failing_probes"] = fails;
  return o;
}

// ---------------------------------------------------------------------------
// means

Outcome means_coeff(const ExperimentConfig& c) {
  const auto f = FunctionRule::parse(param(c, "function"));
  const auto m = approximator(c);
  auto o = make(c, {"theta", "re", "im", "abs", "delta", "approximator"});
  for (const auto& t : param_list(c, "theta")) {
    const auto e = mean_fourier_coefficient(f, m, Frequency::parse(t));
    o.report.table.add_row({Frequency::parse(t).text(), format_double(e.value.real()), format_double(e.value.imag()),
                            format_double(std::abs(e.value)), format_double(e.delta), m.text()});
  }
  return o;
}

Outcome means_weyl(const ExperimentConfig& c) {
  const auto seq = HartmanSequence::parse(param(c, "seq"));
  const auto theta = Frequency::parse(param(c, "theta"));
  const auto N = param_count(c, "N");
  auto o = make(c, {"seq", "theta", "N", "re", "im", "abs"});
  const auto z = weyl_average(seq, theta, N);
  o.report.table.add_row({seq.text(), theta.text(), std::to_string(N), format_double(z.real()), format_double(z.imag()),
                          format_double(std::abs(z))});
  if (c.outputs.count("svg")) {
    Series s{seq.text() + " at " + theta.text(), {}};
    for (std::uint64_t n = 10; n <= N; n *= 10) s.points.emplace_back(static_cast<double>(n), std::abs(weyl_average(seq, theta, n)));
    if (s.points.empty() || s.points.back().first != static_cast<double>(N)) s.points.emplace_back(static_cast<double>(N), std::abs(z));
    o.plot.push_back(std::move(s));
    o.style = {PlotStyle::Kind::line, "Weyl average", "N", "|average|", true};
  }
  return o;
}

Outcome means_brn(const ExperimentConfig& c) {
  const auto f = FunctionRule::parse(param(c, "function"));
  const auto m = approximator(c);
  const auto r = brn_reconstruct(f, m, rational_grid(param_int(c, "q")));
  auto o = make(c, {"theta", "re", "im", "delta"});
  for (std::size_t j = 0; j < r.frequencies.size(); ++j)
    o.report.table.add_row({r.frequencies[j].text(), format_double(r.coefficients[j].real()),
                            format_double(r.coefficients[j].imag()), format_double(r.deltas[j])});
  double err = 0;
  for (std::int64_t x = 0; x < 10000; ++x) err = std::max(err, std::abs(r.evaluate(x) - f(x)));
  o.report.certificates["brn"] = {{"mean_square", r.mean_square},
                                  {"bessel_residual", r.bessel_residual},
                                  {"bessel_ok", r.bessel_ok},
                                  {"sup_error_0_9999", err}};
  return o;
}

// ---------------------------------------------------------------------------
// example

ExampleParameters example_params(const ExperimentConfig& c) {
  return build_parameters(param_int(c, "a1"), GrowthPolicy::parse(param(c, "policy")), param_count(c, "depth"));
}

Outcome example_build(const ExperimentConfig& c) {
  const auto p = example_params(c);
  auto o = make(c, {"n", "a", "b", "q", "F_size", "I_size", "J_size"});
  for (std::size_t i = 0; i < p.depth(); ++i) {
    const std::int64_t q = (p.b[i] - p.a[i]) / 2;
    o.report.table.add_row({std::to_string(i + 1), std::to_string(p.a[i]), std::to_string(p.b[i]), std::to_string(q),
                            std::to_string(p.b[i] - p.a[i] + 1), std::to_string(q + 1), std::to_string(p.b[i] - p.a[i] - q)});
  }
  o.report.certificates["conditions"] = {{"anplus1", true}, {"2an", true}, {"bnplus1", true}};
  return o;
}

Outcome example_verify(const ExperimentConfig& c) {
  const auto sets = build_sets(example_params(c));
  std::vector<TrigPolynomial> phis;
  for (const auto& t : param_list(c, "phi")) phis.push_back(TrigPolynomial::parse(t));
  if (phis.empty()) throw DomainError("--phi needs at least one function");
  const auto blocks = example_report(sets, phis);
  auto o = make(c, {"n", "F_size", "defect", "sumset_density", "cross_coverage", "phi", "lhs_re", "lhs_im", "rhs_re", "rhs_im"});
  Series defect{"defect", {}}, density{"density of A+B", {}};
  for (const auto& b : blocks) {
    const auto& l = b.localization;
    for (std::size_t k = 0; k < phis.size(); ++k) {
      const auto& ob = b.obstruction[k];
      o.report.table.add_row({std::to_string(l.n), std::to_string(l.block_size), format_double(l.defect),
                              format_double(l.sumset_density), format_double(l.cross_coverage), phis[k].text(),
                              format_double(ob.lhs.real()), format_double(ob.lhs.imag()), format_double(ob.rhs.real()),
                              format_double(ob.rhs.imag())});
    }
    defect.points.emplace_back(static_cast<double>(l.n), l.defect);
    density.points.emplace_back(static_cast<double>(l.n), l.sumset_density);
  }
  o.plot = {defect, density};
  o.style = {PlotStyle::Kind::line, "Sumset localization per block", "block n", "fraction of F_n", false};
  return o;
}

// ---------------------------------------------------------------------------
// suite

Outcome suite_acceptance(const ExperimentConfig& c) {
  AcceptanceOptions opt;
  opt.seed = param_count(c, "seed");
  opt.out_dir = param(c, "out");
  for (const auto& s : param_list(c, "only")) opt.only.insert(static_cast<int>(to_number(s, "only")));
  opt.on_result = [](const CriterionResult& r) {
    std::cerr << format_result_line(r) << "\n";
  };
  auto o = make(c, {"id", "name", "pass", "detail"});
  o.report.seed = opt.seed;
  for (const auto& r : run_acceptance(opt))
    o.report.table.add_row({std::to_string(r.id), r.name, r.pass ? "true" : "false", r.detail});
  return o;
}

std::vector<Command> commands() {
  const Flag group{"group", "Z6", "group literal, e.g. Z6 or Z2xZ4"};
  const Flag a{"a", "{0,2,4}", "subset literal"};
  const Flag b{"b", "{0,2,4}", "subset literal"};
  const Flag lo{"lo", "0", "window start"}, hi{"hi", "99999", "window end"};
  const Flag approx{"approx", "initial", "Folner family (centered | initial | shifted(t)) or hartman:SEQ"};
  return {
      {"group", "dft", "Fourier coefficients of an indicator", {group, a}, group_dft},
      {"group", "convolve", "1_A * 1_B by FFT", {group, a, b}, group_convolve},
      {"group", "kneser", "sumset with its stabilizer certificate", {group, a, b}, group_kneser},
      {"group", "steinhaus", "level set of 1_A * 1_B against A + B", {group, a, b}, group_steinhaus},
      {"density", "scan", "Folner and Banach densities",
       {{"rule", "squares", "set rule"}, {"family", "initial", "Folner family"}, {"depth", "10000", "depth n"}, lo, hi,
        {"length", "0", "Banach window length (0 skips)"}},
       density_scan},
      {"density", "classify", "thick, syndetic and piecewise syndetic at a scale",
       {{"rule", "dyadic_runs", "set rule"}, lo, hi, {"probe", "10", "run length"}, {"gap", "1000", "gap bound"}},
       density_classify},
      {"bohr", "window", "membership density against the lower bound",
       {{"spec", "bohr(d=1; theta=0.6180339887498949; eps=0.1; center=0)", "Bohr spec"}, lo, hi}, bohr_window_cmd},
      {"bohr", "scan", "Bohr pieces inside a target",
       {{"rule", "even", "target set rule"}, lo, {"hi", "9999", "window end"}, {"rank", "1", "largest rank"},
        {"run", "0", "run length (0 = whole window)"}, {"seeds", "4", "seed frequencies"}, {"centers", "1", "centers"},
        {"eps", "0.05; 0.1; 0.25", "radii"}, {"thetas", "", "extra frequencies"}},
       bohr_scan},
      {"bohr", "embed", "probes of a Bohr set translated into a target",
       {{"spec", "bohr(d=1; theta=0.6180339887498949; eps=0.1; center=0)", "Bohr spec"}, {"rule", "squares", "target set rule"},
        lo, {"hi", "20000", "window end"}, {"probe-lo", "0", "probe window start"}, {"probe-hi", "100", "probe window end"},
        {"k", "3", "probe size"}, {"samples", "2000", "sampled probes"}, {"seed", "1", "sampling seed"}},
       bohr_embed},
      {"means", "coeff", "mean Fourier coefficients",
       {{"function", "indicator(squares)", "function rule"}, {"theta", "0; 1/2; 1/3", "frequencies"}, approx,
        {"depth", "100000", "depth"}},
       means_coeff},
      {"means", "weyl", "Weyl average along a sequence",
       {{"seq", "pow(2.5)", "sequence"}, {"theta", "0.41421356", "frequency"}, {"N", "1000000", "terms"}}, means_weyl},
      {"means", "brn", "reconstruction from the rational grid",
       {{"function", "indicator(mod(6, 1, 2))", "function rule"}, {"q", "6", "grid denominator"}, approx,
        {"depth", "12000", "depth"}},
       means_brn},
      {"example", "build", "block parameters",
       {{"a1", "10", "first a"}, {"policy", "default", "growth policy"}, {"depth", "6", "blocks"}}, example_build},
      {"example", "verify", "sumset localization and the half obstruction per block",
       {{"a1", "10", "first a"}, {"policy", "default", "growth policy"}, {"depth", "5", "blocks"},
        {"phi", "const(1); sum(const(0.5), scale(0.5, char(1/2))); char(1/3)", "trigonometric polynomials"}},
       example_verify},
      {"suite", "acceptance", "the numbered acceptance list",
       {{"out", "acceptance_artifacts", "artifact directory"}, {"seed", "20240607", "seed"}, {"only", "", "criteria ids"}},
       suite_acceptance},
  };
}

// Config files: {"command": ..., "params": {...}, "outputs": {...}} or a flat object of flags.
ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_object() && (j.contains("params") || j.contains("outputs"))) return ExperimentConfig::from_json(j);
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [k, v] : j.items()) {
    const auto text = v.is_string() ? v.get<std::string>() : v.dump();
    if (k == "command") c.command = text;
    else if (k == "csv" || k == "json" || k == "svg") c.outputs[k] = text;
    else c.params[k] = text;
  }
  return c;
}

int exit_for(const std::exception& e) {
  if (dynamic_cast<const CapacityError*>(&e)) return kCapacity;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const StructuralError*>(&e) ||
      dynamic_cast<const ConstructionError*>(&e) || dynamic_cast<const PrecisionError*>(&e))
    return kValidation;
  return kFailure;
}

}  // namespace

int run_command(int argc, char** argv) {
  CLI::App app{"sumsetlab: sumsets, densities, Bohr sets and means on abelian groups"};
  app.require_subcommand(1);
  int threads = 0;
  std::string config_path;
  app.add_option("--threads", threads, "worker cap (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--config", config_path, "JSON file with the subcommand's flags");

  const auto table = commands();
  std::map<std::string, CLI::App*> groups;
  std::vector<std::map<std::string, std::string>> values(table.size());
  std::vector<std::map<std::string, std::string>> outputs(table.size());
  std::vector<std::pair<CLI::App*, std::size_t>> leaves;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& cmd = table[i];
    if (!groups.count(cmd.group)) {
      groups[cmd.group] = app.add_subcommand(cmd.group, cmd.group + " experiments");
      groups[cmd.group]->require_subcommand(1);
    }
    auto* sub = groups[cmd.group]->add_subcommand(cmd.name, cmd.help);
    for (const auto& f : cmd.flags) {
      values[i][f.name] = f.fallback;
      sub->add_option("--" + f.name, values[i][f.name], f.help + " [" + f.fallback + "]");
    }
    for (const char* kind : {"csv", "json", "svg"}) sub->add_option(std::string("--") + kind, outputs[i][kind], std::string(kind) + " output path");
    leaves.emplace_back(sub, i);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const CLI::RequiredError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  }

  kernels::set_threads(threads);
  for (const auto& [sub, i] : leaves) {
    if (!sub->parsed()) continue;
    const auto& cmd = table[i];
    try {
      ExperimentConfig cfg;
      cfg.command = cmd.group + " " + cmd.name;
      if (!config_path.empty()) {
        const auto file = read_config_file(config_path);
        if (!file.command.empty() && file.command != cfg.command)
          throw DomainError("config is for '" + file.command + "', not '" + cfg.command + "'");
        for (const auto& [k, v] : file.params) {
          if (!values[i].count(k)) throw DomainError("unknown parameter '" + k + "' for " + cfg.command);
          if (sub->count("--" + k) == 0) values[i][k] = v;
        }
        for (const auto& [k, v] : file.outputs)
          if (sub->count("--" + k) == 0) outputs[i][k] = v;
      }
      cfg.params = values[i];
      for (const auto& [k, v] : outputs[i])
        if (!v.empty()) cfg.outputs[k] = v;

      const auto t0 = std::chrono::steady_clock::now();
      auto out = cmd.run(cfg);
      out.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_artifacts(out.report);
      if (cfg.outputs.count("svg") && !out.plot.empty()) emit_svg_plot(out.plot, out.style, cfg.outputs.at("svg"));
      if (!cfg.outputs.count("csv")) std::cout << out.report.table.str();
      std::fprintf(stderr, "[sumsetlab] %s: %zu rows in %.3f s\n", cfg.command.c_str(), out.report.table.rows.size(),
                   out.report.wall_seconds);
      if (cmd.group == "suite")
        for (const auto& r : out.report.table.rows)
          if (r[2] != "true") return kFailure;
      return kOk;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_for(e);
    }
  }
  std::cerr << app.help();
  return kUsage;
}

}  // namespace sumset
