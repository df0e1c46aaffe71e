#include "sumsetlab/floors.hpp"

#include <cctype>
#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>

#include <gmpxx.h>
#include <mpfr.h>

#include "sumsetlab/error.hpp"

namespace sumset {

namespace {

constexpr long double kInt64Limit = 9223372036854775807.0L;

/// Smallest k with d | 10^k, or -1 when d has a prime factor other than 2 and 5.
int decimal_places(std::int64_t d) {
  int twos = 0, fives = 0;
  while (d % 2 == 0) d /= 2, ++twos;
  while (d % 5 == 0) d /= 5, ++fives;
  return d == 1 ? std::max(twos, fives) : -1;
}

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw CapacityError("sequence term does not fit in 64 bits");
  return z.get_si();
}

/// RAII wrapper so escalation loops cannot leak limbs.
struct Mpfr {
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_t v;
};

/// floor(v) if the interval [v - err, v + err] contains no integer, where err = v * rel.
bool separated_floor(const mpfr_t v, const mpfr_t rel, std::int64_t& out) {
  const mpfr_prec_t prec = mpfr_get_prec(v);
  Mpfr err(prec), lo(prec), hi(prec);
  mpfr_mul(err.v, v, rel, MPFR_RNDU);
  mpfr_sub(lo.v, v, err.v, MPFR_RNDD);
  mpfr_add(hi.v, v, err.v, MPFR_RNDU);
  mpfr_floor(lo.v, lo.v);
  mpfr_floor(hi.v, hi.v);
  if (!mpfr_equal_p(lo.v, hi.v)) return false;
  if (mpfr_cmp_d(lo.v, static_cast<double>(kInt64Limit)) >= 0) throw CapacityError("sequence term does not fit in 64 bits");
  out = mpfr_get_sj(lo.v, MPFR_RNDN);
  return true;
}

/// Tries the long double estimate v with absolute error bound margin.
bool fast_floor(long double v, long double margin, std::int64_t& out) {
  if (!(v < kInt64Limit)) throw CapacityError("sequence term does not fit in 64 bits");
  const long double fl = std::floor(v);
  if (v - fl <= margin || fl + 1 - v <= margin) return false;
  out = static_cast<std::int64_t>(fl);
  return true;
}

void check_exponent(const ExactReal& c) {
  if (c.num <= 0) throw DomainError("exponent must be positive");
}

}  // namespace

ExactReal ExactReal::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  const std::string bad = "bad number literal: " + std::string(text);
  if (s.empty()) throw DomainError(bad);

  auto parse_decimal = [&](std::string_view t, __int128& num, __int128& den) {
    bool neg = false;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
      neg = t[0] == '-';
      t.remove_prefix(1);
    }
    if (t.empty()) throw DomainError(bad);
    num = 0;
    den = 1;
    bool dot = false, digit = false;
    for (char ch : t) {
      if (ch == '.' && !dot) {
        dot = true;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(ch))) throw DomainError(bad);
      digit = true;
      num = num * 10 + (ch - '0');
      if (dot) den *= 10;
      if (num > (__int128{1} << 62) || den > (__int128{1} << 62)) throw DomainError("number literal too long: " + std::string(text));
    }
    if (!digit) throw DomainError(bad);
    if (neg) num = -num;
  };

  __int128 num, den;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    __int128 pn, pd, qn, qd;
    parse_decimal(s.substr(0, slash), pn, pd);
    parse_decimal(s.substr(slash + 1), qn, qd);
    if (qn == 0) throw DomainError("zero denominator: " + std::string(text));
    num = pn * qd;
    den = pd * qn;
    if (den < 0) {
      num = -num;
      den = -den;
    }
  } else {
    parse_decimal(s, num, den);
  }
  __int128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  const __int128 lim = std::numeric_limits<std::int64_t>::max();
  if (num > lim || -num > lim || den > lim) throw DomainError("number literal too long: " + std::string(text));
  return ExactReal{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::string ExactReal::text() const {
  if (den == 1) return std::to_string(num);
  const int k = decimal_places(den);
  if (k < 0 || k > 18) return std::to_string(num) + "/" + std::to_string(den);
  const auto places = static_cast<std::size_t>(k);
  unsigned __int128 scale = 1;
  for (int i = 0; i < k; ++i) scale *= 10;
  const unsigned __int128 mag = static_cast<unsigned __int128>(num < 0 ? -static_cast<__int128>(num) : num) *
                                (scale / static_cast<unsigned __int128>(den));
  std::string digits;
  for (unsigned __int128 m = mag; m > 0; m /= 10) digits.insert(digits.begin(), static_cast<char>('0' + m % 10));
  if (digits.empty()) digits = "0";
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  digits.insert(digits.size() - places, ".");
  return (num < 0 ? "-" : "") + digits;
}

FloorStats& floor_stats() {
  thread_local FloorStats stats;
  return stats;
}

std::int64_t floor_pow(std::uint64_t n, const ExactReal& c) {
  check_exponent(c);
  if (n == 0) throw DomainError("floor_pow needs n >= 1");
  if (n == 1) return 1;
  auto& stats = floor_stats();
  const long double v = std::pow(static_cast<long double>(n), c.value());
  std::int64_t out;
  if (fast_floor(v, v * 1e-17L + 1e-17L, out)) {
    ++stats.fast;
    return out;
  }
  if (c.num <= 64) {
    // floor(n^(p/q)) = integer q-th root of n^p, exactly.
    ++stats.exact_root;
    mpz_class power, root;
    mpz_ui_pow_ui(power.get_mpz_t(), n, static_cast<unsigned long>(c.num));
    mpz_root(root.get_mpz_t(), power.get_mpz_t(), static_cast<unsigned long>(c.den));
    return to_int64(root);
  }
  ++stats.mpfr;
  for (mpfr_prec_t prec = 128; prec <= 2048; prec *= 2) {
    Mpfr x(prec), y(prec), rel(prec);
    mpfr_set_ui(x.v, n, MPFR_RNDN);
    mpfr_log(x.v, x.v, MPFR_RNDN);
    mpfr_mul_si(x.v, x.v, c.num, MPFR_RNDN);
    mpfr_div_si(x.v, x.v, c.den, MPFR_RNDN);
    // relative error of exp(y) is below (4|y| + 4) ulp
    mpfr_abs(rel.v, x.v, MPFR_RNDU);
    mpfr_mul_ui(rel.v, rel.v, 4, MPFR_RNDU);
    mpfr_add_ui(rel.v, rel.v, 4, MPFR_RNDU);
    mpfr_mul_2si(rel.v, rel.v, -prec, MPFR_RNDU);
    mpfr_exp(y.v, x.v, MPFR_RNDN);
    if (separated_floor(y.v, rel.v, out)) return out;
  }
  throw PrecisionError("cannot certify floor(" + std::to_string(n) + "^" + c.text() + ") at 2048 bits");
}

std::int64_t floor_exp_log_pow(std::uint64_t n, const ExactReal& c) {
  check_exponent(c);
  if (n == 0) throw DomainError("floor_exp_log_pow needs n >= 1");
  if (n == 1) return 1;
  if (c.num == 1 && c.den == 1) return static_cast<std::int64_t>(n);  // the one integer-valued case
  auto& stats = floor_stats();
  const long double l = std::log(static_cast<long double>(n));
  const long double y = std::pow(l, c.value());
  const long double v = std::exp(y);
  const long double cv = c.value();
  const long double rel = (y * (cv + cv * std::fabs(std::log(l)) + 3) + 2) * 1e-18L;
  std::int64_t out;
  if (fast_floor(v, v * rel + 1e-18L, out)) {
    ++stats.fast;
    return out;
  }
  ++stats.mpfr;
  for (mpfr_prec_t prec = 128; prec <= 2048; prec *= 2) {
    Mpfr lg(prec), e(prec), y2(prec), v2(prec), rel2(prec), t(prec);
    mpfr_set_ui(lg.v, n, MPFR_RNDN);
    mpfr_log(lg.v, lg.v, MPFR_RNDN);
    mpfr_set_si(e.v, c.num, MPFR_RNDN);
    mpfr_div_si(e.v, e.v, c.den, MPFR_RNDN);
    mpfr_pow(y2.v, lg.v, e.v, MPFR_RNDN);
    mpfr_exp(v2.v, y2.v, MPFR_RNDN);
    // relative error of y below (c + c|log log n| + 4) ulp; exp turns it into y times that
    mpfr_log(t.v, lg.v, MPFR_RNDN);
    mpfr_abs(t.v, t.v, MPFR_RNDU);
    mpfr_add_ui(t.v, t.v, 1, MPFR_RNDU);
    mpfr_mul(t.v, t.v, e.v, MPFR_RNDU);
    mpfr_add_ui(t.v, t.v, 4, MPFR_RNDU);
    mpfr_mul(rel2.v, t.v, y2.v, MPFR_RNDU);
    mpfr_mul_ui(rel2.v, rel2.v, 4, MPFR_RNDU);
    mpfr_add_ui(rel2.v, rel2.v, 4, MPFR_RNDU);
    mpfr_mul_2si(rel2.v, rel2.v, -prec, MPFR_RNDU);
    if (separated_floor(v2.v, rel2.v, out)) return out;
  }
  throw PrecisionError("cannot certify floor(exp((log " + std::to_string(n) + ")^" + c.text() + ")) at 2048 bits");
}

std::int64_t floor_poly(std::int64_t n, const std::vector<ExactReal>& coefficients) {
  if (coefficients.empty()) throw DomainError("polynomial needs at least one coefficient");
  mpz_class den = 1;
  for (const auto& c : coefficients) mpz_lcm_ui(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(c.den));
  mpz_class acc = 0, power = 1;
  const mpz_class nn = static_cast<long>(n);
  for (const auto& c : coefficients) {
    acc += mpz_class(static_cast<long>(c.num)) * (den / static_cast<unsigned long>(c.den)) * power;
    power *= nn;
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), acc.get_mpz_t(), den.get_mpz_t());
  return to_int64(q);
}

}  // namespace sumset
