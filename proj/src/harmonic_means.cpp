#include "sumsetlab/harmonic_means.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
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

constexpr long double kTwoPi = 2 * std::numbers::pi_v<long double>;

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_double(std::string_view s, const char* what) {
  s = trim(s);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw DomainError(std::string("expected a number for ") + what + ", got '" + std::string(s) + "'");
  return v;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  while (b) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// Frequency

Frequency Frequency::rational(std::int64_t j, std::int64_t q) {
  if (q < 1) throw DomainError("frequency denominator must be >= 1");
  Frequency f;
  j %= q;
  if (j < 0) j += q;
  const std::int64_t g = j == 0 ? q : gcd64(j, q);
  f.num_ = j / g;
  f.den_ = q / g;
  return f;
}

Frequency Frequency::real(double theta) {
  if (!std::isfinite(theta)) throw DomainError("frequency must be finite");
  Frequency f;
  f.den_ = 0;
  f.num_ = 0;
  double a = std::fabs(theta);
  a -= std::floor(a);
  if (a >= 1) a = 0;
  f.theta_ = a;
  f.neg_ = theta < 0 && a != 0;
  return f;
}

Frequency Frequency::parse(std::string_view text) {
  const auto s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos)
    return rational(parse_int(s.substr(0, slash), "frequency numerator"), parse_int(s.substr(slash + 1), "frequency denominator"));
  std::int64_t k = 0;
  if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), k); ec == std::errc() && p == s.data() + s.size())
    return rational(k, 1);
  return real(parse_double(s, "frequency"));
}

double Frequency::value() const noexcept {
  if (exact()) return static_cast<double>(num_) / static_cast<double>(den_);
  return neg_ ? 1 - theta_ : theta_;
}

Frequency Frequency::conj() const {
  if (exact()) return rational(den_ - num_, den_);
  Frequency f = *this;
  f.neg_ = theta_ != 0 && !neg_;
  return f;
}

long double Frequency::phase(std::int64_t x) const {
  if (exact()) {
    __int128 r = static_cast<__int128>(num_) * x % den_;
    if (r < 0) r += den_;
    return static_cast<long double>(r) / static_cast<long double>(den_);
  }
  if (theta_ == 0) return 0;
  const __int128 xx = neg_ ? -static_cast<__int128>(x) : static_cast<__int128>(x);
  // theta_ = m * 2^e with m a 53-bit integer, so theta_ * x mod 1 is a dyadic rational
  int exp2 = 0;
  const double frac = std::frexp(theta_, &exp2);
  const auto m = static_cast<std::int64_t>(std::ldexp(frac, 53));
  const int shift = 53 - exp2;  // theta_ = m / 2^shift, shift >= 53
  long double ph;
  if (shift <= 120) {
    const __int128 mask = (static_cast<__int128>(1) << shift) - 1;
    const __int128 r = (static_cast<__int128>(m) * xx) & mask;  // two's complement: the nonnegative residue
    ph = std::ldexp(static_cast<long double>(r), -shift);
  } else {
    // |theta_ * x| < 2^(116 - shift) < 1
    ph = static_cast<long double>(theta_) * static_cast<long double>(xx);
    if (ph < 0) ph += 1;
  }
  return ph >= 1 ? 0 : ph;
}

std::complex<double> Frequency::operator()(std::int64_t x) const {
  const double a = static_cast<double>(kTwoPi * phase(x));
  return {std::cos(a), std::sin(a)};
}

std::string Frequency::text() const {
  if (exact()) return den_ == 1 ? "0" : std::to_string(num_) + "/" + std::to_string(den_);
  return (neg_ ? "-" : "") + shortest(theta_);
}

// ---------------------------------------------------------------------------
// Function rules

FunctionRule::FunctionRule(std::string text, Eval eval, double sup_bound)
    : text_(std::move(text)), eval_(std::move(eval)), sup_(sup_bound) {}

FunctionRule FunctionRule::indicator(const SetRule& rule) {
  return FunctionRule("indicator(" + rule.text() + ")",
                      [rule](std::int64_t x) { return std::complex<double>(rule.contains(x) ? 1.0 : 0.0, 0.0); }, 1.0);
}

FunctionRule FunctionRule::constant(std::complex<double> c) {
  const std::string text = c.imag() == 0 ? "const(" + shortest(c.real()) + ")"
                                         : "const(" + shortest(c.real()) + "," + shortest(c.imag()) + ")";
  return FunctionRule(text, [c](std::int64_t) { return c; }, std::abs(c));
}

FunctionRule FunctionRule::character(const Frequency& theta) {
  return FunctionRule("char(" + theta.text() + ")", [theta](std::int64_t x) { return theta(x); }, 1.0);
}

FunctionRule FunctionRule::parse(std::string_view text) {
  auto [name, args] = split_call(text);
  if (name == "indicator") {
    expect_args(name, args, 1, 1);
    return indicator(SetRule::parse(args[0]));
  }
  if (name == "const") {
    expect_args(name, args, 1, 2);
    return constant({parse_double(args[0], "const"), args.size() == 2 ? parse_double(args[1], "const") : 0.0});
  }
  if (name == "char") {
    expect_args(name, args, 1, 1);
    return character(Frequency::parse(args[0]));
  }
  if (name == "sum") {
    expect_args(name, args, 1, 1u << 20);
    std::vector<FunctionRule> parts;
    std::string t;
    double sup = 0;
    for (auto a : args) {
      parts.push_back(parse(a));
      t += (t.empty() ? "" : ",") + parts.back().text();
      sup += parts.back().sup_bound();
    }
    return FunctionRule("sum(" + t + ")",
                        [parts](std::int64_t x) {
                          std::complex<double> s{};
                          for (const auto& p : parts) s += p(x);
                          return s;
                        },
                        sup);
  }
  if (name == "scale") {
    expect_args(name, args, 2, 2);
    const double c = parse_double(args[0], "scale");
    auto f = parse(args[1]);
    return FunctionRule("scale(" + shortest(c) + "," + f.text() + ")", [c, f](std::int64_t x) { return c * f(x); },
                        std::fabs(c) * f.sup_bound());
  }
  if (name == "truncate") {
    expect_args(name, args, 2, 2);
    return truncate(parse(args[0]), parse_double(args[1], "truncate"));
  }
  throw DomainError("unknown function rule '" + name + "'");
}

std::complex<double> truncate_value(std::complex<double> z, double alpha) {
  const double r = std::abs(z);
  if (r < alpha) return z;
  // keep |result| <= alpha after rounding, so a second clamp is the identity
  double s = alpha / r;
  auto w = z * s;
  while (std::abs(w) > alpha) {
    s = std::nextafter(s, 0.0);
    w = z * s;
  }
  return w;
}

FunctionRule truncate(const FunctionRule& f, double alpha) {
  if (!(alpha > 0)) throw DomainError("truncation level must be positive");
  return FunctionRule("truncate(" + f.text() + "," + shortest(alpha) + ")",
                      [f, alpha](std::int64_t x) { return truncate_value(f(x), alpha); }, std::min(alpha, f.sup_bound()));
}

// ---------------------------------------------------------------------------
// Sequences

HartmanSequence HartmanSequence::identity() { return {}; }

HartmanSequence HartmanSequence::parse(std::string_view text) {
  auto [name, args] = split_call(text);
  HartmanSequence s;
  if (name == "identity") {
    expect_args(name, args, 0, 0);
  } else if (name == "pow") {
    expect_args(name, args, 1, 1);
    s.kind_ = Kind::power;
    s.c_ = ExactReal::parse(args[0]);
    if (s.c_.num <= 0) throw DomainError("pow exponent must be positive");
    if (s.c_.den == 1) throw DomainError("pow exponent must not be an integer; write it as poly(...)");
  } else if (name == "poly") {
    expect_args(name, args, 1, 64);
    s.kind_ = Kind::polynomial;
    for (auto a : args) s.coeffs_.push_back(ExactReal::parse(a));
  } else if (name == "logpow") {
    expect_args(name, args, 1, 1);
    s.kind_ = Kind::log_power;
    s.c_ = ExactReal::parse(args[0]);
    if (s.c_.num <= 0) throw DomainError("logpow exponent must be positive");
  } else if (name == "custom") {
    expect_args(name, args, 1, 1);
    s.kind_ = Kind::custom;
    s.rule_ = SetRule::parse(args[0]);
  } else {
    throw DomainError("unknown sequence '" + name + "' (identity | pow(c) | poly(...) | logpow(c) | custom(R))");
  }
  return s;
}

std::string HartmanSequence::text() const {
  switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::power: return "pow(" + c_.text() + ")";
    case Kind::polynomial: {
      std::string t;
      for (const auto& c : coeffs_) t += (t.empty() ? "" : ",") + c.text();
      return "poly(" + t + ")";
    }
    case Kind::log_power: return "logpow(" + c_.text() + ")";
    case Kind::custom: return "custom(" + rule_->text() + ")";
  }
  return {};
}

std::int64_t HartmanSequence::term(std::uint64_t n) const {
  if (n == 0) throw DomainError("sequence index starts at 1");
  try {
    switch (kind_) {
      case Kind::identity:
        if (n > static_cast<std::uint64_t>(INT64_MAX)) throw CapacityError("index too large");
        return static_cast<std::int64_t>(n);
      case Kind::power: return floor_pow(n, c_);
      case Kind::polynomial:
        if (n > static_cast<std::uint64_t>(INT64_MAX)) throw CapacityError("index too large");
        return floor_poly(static_cast<std::int64_t>(n), coeffs_);
      case Kind::log_power: return floor_exp_log_pow(n, c_);
      case Kind::custom: return generate(n).back();
    }
  } catch (const CapacityError& e) {
    throw CapacityError(text() + ": a_n leaves the 64-bit range at n = " + std::to_string(n) + " (" + e.what() + ")");
  }
  return 0;
}

std::vector<std::int64_t> HartmanSequence::generate(std::uint64_t count) const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  if (kind_ != Kind::custom) {
    for (std::uint64_t n = 1; n <= count; ++n) out.push_back(term(n));
    return out;
  }
  constexpr std::size_t chunk = std::size_t{1} << 16;
  Bitset buf(chunk);
  std::uint64_t scanned = 0;
  for (std::int64_t lo = 1; out.size() < count; lo += static_cast<std::int64_t>(chunk)) {
    if (scanned >= window_cap_bits())
      throw CapacityError(text() + ": fewer than " + std::to_string(count) + " elements among the first " +
                          std::to_string(scanned) + " positive integers");
    rule_->fill(lo, buf);
    for (auto i = buf.find_first(); i != Bitset::npos && out.size() < count; i = buf.find_next(i + 1))
      out.push_back(lo + static_cast<std::int64_t>(i));
    scanned += chunk;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Means

MeanApproximator MeanApproximator::folner(const FolnerFamily& fam, std::uint64_t depth) {
  if (depth == 0) throw DomainError("mean depth must be >= 1");
  MeanApproximator m;
  m.family = fam;
  m.depth = depth;
  return m;
}

MeanApproximator MeanApproximator::hartman(const HartmanSequence& seq, std::uint64_t depth) {
  if (depth == 0) throw DomainError("mean depth must be >= 1");
  MeanApproximator m;
  m.kind = Kind::hartman;
  m.sequence = seq;
  m.depth = depth;
  return m;
}

std::string MeanApproximator::text() const {
  return (kind == Kind::folner ? "folner(" + family.text() : "hartman(" + sequence->text()) + "," +
         std::to_string(depth) + ")";
}

std::uint64_t MeanApproximator::support_size(std::uint64_t n) const {
  return kind == Kind::folner ? family.window(n).size() : n;
}

std::complex<double> approximate_mean(const MeanApproximator& m, std::uint64_t n,
                                      const std::function<std::complex<double>(std::int64_t)>& g) {
  if (n == 0) throw DomainError("mean depth must be >= 1");
  const std::uint64_t size = m.support_size(n);
  std::complex<double> total;
  if (m.kind == MeanApproximator::Kind::folner) {
    const std::int64_t lo = m.family.window(n).lo;
    total = kernels::parallel::chunked_sum(size, [&](std::size_t i) { return g(lo + static_cast<std::int64_t>(i)); });
  } else if (m.sequence->kind() == HartmanSequence::Kind::custom) {
    const auto terms = m.sequence->generate(n);
    total = kernels::parallel::chunked_sum(size, [&](std::size_t i) { return g(terms[i]); });
  } else {
    const auto& seq = *m.sequence;
    total = kernels::parallel::chunked_sum(size, [&](std::size_t i) { return g(seq.term(i + 1)); });
  }
  return total / static_cast<double>(size);
}

Estimate mean_fourier_coefficient(const FunctionRule& f, const MeanApproximator& m, const Frequency& theta) {
  const auto g = [&](std::int64_t x) { return f(x) * std::conj(theta(x)); };
  Estimate e;
  e.value = approximate_mean(m, m.depth, g);
  e.delta = std::abs(e.value - approximate_mean(m, std::max<std::uint64_t>(1, m.depth / 2), g));
  return e;
}

std::complex<double> weyl_average(const HartmanSequence& seq, const Frequency& theta, std::uint64_t n) {
  if (n == 0) throw DomainError("Weyl depth must be >= 1");
  if (theta.trivial()) {
    seq.term(n);  // still surfaces overflow
    return {1.0, 0.0};
  }
  std::complex<double> total;
  if (seq.kind() == HartmanSequence::Kind::custom) {
    const auto terms = seq.generate(n);
    total = kernels::parallel::chunked_sum(n, [&](std::size_t i) { return theta(terms[i]); });
  } else {
    total = kernels::parallel::chunked_sum(n, [&](std::size_t i) { return theta(seq.term(i + 1)); });
  }
  return total / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Reconstruction

std::complex<double> BRNApproximation::evaluate(std::int64_t x) const {
  std::complex<double> s{};
  for (std::size_t j = 0; j < frequencies.size(); ++j) s += coefficients[j] * frequencies[j](x);
  return s;
}

namespace {

void require_distinct(const std::vector<Frequency>& freqs) {
  for (std::size_t i = 0; i < freqs.size(); ++i)
    for (std::size_t j = i + 1; j < freqs.size(); ++j)
      if (freqs[i] == freqs[j] || freqs[i].value() == freqs[j].value())
        throw DomainError("frequency " + freqs[i].text() + " listed twice");
}

}  // namespace

BRNApproximation brn_reconstruct(const FunctionRule& f, const MeanApproximator& m, const std::vector<Frequency>& freqs,
                                 double tolerance) {
  require_distinct(freqs);
  BRNApproximation r;
  r.frequencies = freqs;
  double worst = 0;
  double energy = 0;
  for (const auto& th : freqs) {
    const auto e = mean_fourier_coefficient(f, m, th);
    r.coefficients.push_back(e.value);
    r.deltas.push_back(e.delta);
    worst = std::max(worst, e.delta);
    energy += std::norm(e.value);
  }
  const auto sq = [&](std::int64_t x) { return std::complex<double>(std::norm(f(x)), 0.0); };
  r.mean_square = approximate_mean(m, m.depth, sq).real();
  worst = std::max(worst, std::fabs(r.mean_square - approximate_mean(m, std::max<std::uint64_t>(1, m.depth / 2), sq).real()));
  r.bessel_residual = r.mean_square - energy;
  r.bessel_slack = tolerance + 10 * worst;
  r.bessel_ok = r.bessel_residual >= -r.bessel_slack;
  return r;
}

std::vector<Frequency> rational_grid(std::int64_t q) {
  if (q < 1) throw DomainError("grid size must be >= 1");
  std::vector<Frequency> out;
  for (std::int64_t j = 0; j < q; ++j) out.push_back(Frequency::rational(j, q));
  return out;
}

std::complex<double> ExpansionReport::h(std::int64_t x) const {
  std::complex<double> s{};
  for (std::size_t j = 0; j < frequencies.size(); ++j) s += f_coefficients[j] * g_coefficients[j] * frequencies[j](x);
  return s;
}

ExpansionReport convolution_expansion_on_Z(const SetRule& a, const SetRule& b, const MeanApproximator& nu,
                                           const MeanApproximator& eta, const std::vector<Frequency>& freqs,
                                           double level, Interval window, std::int64_t reach) {
  require_distinct(freqs);
  if (window.lo > window.hi) throw DomainError("empty window");
  if (reach < 0) throw DomainError("reach must be >= 0");
  ExpansionReport r;
  r.frequencies = freqs;
  r.level = level;
  r.window = window;
  const auto fa = FunctionRule::indicator(a);
  const auto gb = FunctionRule::indicator(b);
  for (const auto& th : freqs) {
    r.f_coefficients.push_back(mean_fourier_coefficient(fa, nu, th).value);
    r.g_coefficients.push_back(mean_fourier_coefficient(gb, eta, th).value);
  }

  // A + B on the window from the elements of B in [-reach, reach]
  const auto len = static_cast<std::size_t>(window.size());
  const auto ext = WindowSet::from_rule(a, window.lo - reach, window.hi + reach);
  Bitset sum(len);
  for (std::int64_t y = -reach; y <= reach; ++y)
    if (b.contains(y)) sum.or_shifted_down(ext.members(), static_cast<std::size_t>(reach - y));

  // rational phases depend on x mod den only, so h is read off one period when that is short
  std::int64_t period = 1;
  for (const auto& th : freqs) {
    if (!th.exact() || period > (1 << 16)) {
      period = 0;
      break;
    }
    period = std::lcm(period, th.den());
  }
  std::vector<char> above;
  if (period > 0 && period <= (1 << 16))
    for (std::int64_t x = 0; x < period; ++x) above.push_back(r.h(x).real() >= level);
  const auto is_above = [&](std::int64_t x) {
    if (above.empty()) return r.h(x).real() >= level;
    std::int64_t m = x % period;
    return above[static_cast<std::size_t>(m < 0 ? m + period : m)] != 0;
  };

  std::uint64_t level_count = 0, defect = 0;
#pragma omp parallel for schedule(static) reduction(+ : level_count, defect)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(len); ++i) {
    if (is_above(window.lo + i)) {
      ++level_count;
      if (!sum.test(static_cast<std::size_t>(i))) ++defect;
    }
  }
  r.level_count = level_count;
  r.defect_count = defect;
  r.defect_density = static_cast<double>(defect) / static_cast<double>(len);
  return r;
}

}  // namespace sumset
