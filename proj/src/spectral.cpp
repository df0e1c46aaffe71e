#include "sumsetlab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "sumsetlab/error.hpp"
#include "sumsetlab/kernels.hpp"

namespace sumset {

namespace {

void require_same_group(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b, const char* op) {
  if (!(a == b)) throw StructuralError(std::string(op) + ": functions live on " + a.literal() + " and " + b.literal());
}

}  // namespace

GroupFunction::GroupFunction(const FiniteAbelianGroup& g) : group_(g), values_(g.size()) {}

GroupFunction::GroupFunction(const FiniteAbelianGroup& g, std::vector<Complex> values)
    : group_(g), values_(std::move(values)) {
  if (values_.size() != g.size())
    throw StructuralError("function has " + std::to_string(values_.size()) + " values, group " + g.literal() +
                          " has " + std::to_string(g.size()) + " elements");
}

GroupFunction GroupFunction::indicator(const FiniteAbelianGroup& g, const Bitset& members) {
  if (members.size() != g.size()) throw StructuralError("indicator: bitset does not match group size");
  GroupFunction f(g);
  for (std::size_t x = members.find_first(); x != Bitset::npos; x = members.find_next(x + 1)) f.values_[x] = 1.0;
  return f;
}

GroupFunction GroupFunction::constant(const FiniteAbelianGroup& g, Complex c) {
  return GroupFunction(g, std::vector<Complex>(g.size(), c));
}

GroupFunction GroupFunction::delta(const FiniteAbelianGroup& g, std::size_t at) {
  if (at >= g.size()) throw StructuralError("delta: index out of range");
  GroupFunction f(g);
  f.values_[at] = 1.0;
  return f;
}

GroupFunction GroupFunction::character(const FiniteAbelianGroup& g, std::size_t chi) {
  if (chi >= g.size()) throw StructuralError("character index out of range");
  GroupFunction f(g);
  for (std::size_t x = 0; x < g.size(); ++x) f.values_[x] = g.char_eval_index(chi, x);
  return f;
}

Complex GroupFunction::integral() const {
  Complex s{};
  for (const auto& v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

GroupFunction& GroupFunction::operator+=(const GroupFunction& o) {
  require_same_group(group_, o.group_, "add");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GroupFunction& GroupFunction::operator-=(const GroupFunction& o) {
  require_same_group(group_, o.group_, "subtract");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GroupFunction& GroupFunction::operator*=(Complex c) {
  for (auto& v : values_) v *= c;
  return *this;
}

double Spectrum::energy() const {
  double e = 0;
  for (const auto& c : coefficients) e += std::norm(c);
  return e;
}

double SpectralMeasure::total_mass() const {
  double s = 0;
  for (auto w : weights) s += w;
  return s;
}

GroupFunction SpectralMeasure::transform() const {
  std::vector<Complex> data(weights.begin(), weights.end());
  kernels::parallel::dft_axes(group, data, +1);
  return GroupFunction(group, std::move(data));
}

Spectrum dft(const GroupFunction& f) {
  std::vector<Complex> data(f.values().begin(), f.values().end());
  kernels::parallel::dft_axes(f.group(), data, -1);
  const double scale = 1.0 / static_cast<double>(f.size());
  for (auto& c : data) c *= scale;
  return Spectrum{f.group(), std::move(data)};
}

GroupFunction inverse_dft(const Spectrum& s) {
  if (s.coefficients.size() != s.group.size()) throw StructuralError("spectrum length does not match group size");
  std::vector<Complex> data = s.coefficients;
  kernels::parallel::dft_axes(s.group, data, +1);
  return GroupFunction(s.group, std::move(data));
}

GroupFunction convolve(const GroupFunction& f, const GroupFunction& g) {
  require_same_group(f.group(), g.group(), "convolve");
  Spectrum sf = dft(f);
  const Spectrum sg = dft(g);
  for (std::size_t i = 0; i < sf.coefficients.size(); ++i) sf.coefficients[i] *= sg.coefficients[i];
  return inverse_dft(sf);
}

GroupFunction convolve_direct(const GroupFunction& f, const GroupFunction& g) {
  require_same_group(f.group(), g.group(), "convolve_direct");
  return GroupFunction(f.group(), kernels::serial::convolve_direct(f.group(), f.values(), g.values()));
}

Complex inner_product(const GroupFunction& a, const GroupFunction& b) {
  require_same_group(a.group(), b.group(), "inner_product");
  Complex s{};
  for (std::size_t x = 0; x < a.size(); ++x) s += a(x) * std::conj(b(x));
  return s / static_cast<double>(a.size());
}

double sup_distance(const GroupFunction& a, const GroupFunction& b) {
  require_same_group(a.group(), b.group(), "sup_distance");
  double d = 0;
  for (std::size_t x = 0; x < a.size(); ++x) d = std::max(d, std::abs(a(x) - b(x)));
  return d;
}

double convolution_expansion_check(const GroupFunction& f, const GroupFunction& g) {
  require_same_group(f.group(), g.group(), "convolution_expansion_check");
  const GroupFunction direct = convolve_direct(f, g);
  Spectrum product = dft(f);
  const Spectrum sg = dft(g);
  for (std::size_t i = 0; i < product.coefficients.size(); ++i) product.coefficients[i] *= sg.coefficients[i];
  return sup_distance(direct, inverse_dft(product));
}

double parseval_check(const GroupFunction& f, const GroupFunction& g) {
  require_same_group(f.group(), g.group(), "parseval_check");
  const Spectrum sf = dft(f);
  const Spectrum sg = dft(g);
  Complex lhs{};
  for (std::size_t i = 0; i < sf.coefficients.size(); ++i) lhs += sf.coefficients[i] * std::conj(sg.coefficients[i]);
  return std::abs(lhs - inner_product(f, g));
}

GroupFunction matrix_coefficient(const GroupFunction& w, const GroupFunction& v) {
  require_same_group(w.group(), v.group(), "matrix_coefficient");
  const auto& g = w.group();
  GroupFunction phi(g);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t y = 0; y < g.size(); ++y) {
    Complex s{};
    for (std::size_t x = 0; x < g.size(); ++x) s += v(x) * std::conj(w(g.sub_index(x, y)));
    phi[y] = s * scale;
  }
  return phi;
}

SpectralMeasure spectral_measure(const GroupFunction& w) {
  const Spectrum s = dft(w);
  SpectralMeasure sigma{w.group(), std::vector<double>(s.coefficients.size())};
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) sigma.weights[i] = std::norm(s.coefficients[i]);
  return sigma;
}

double bochner_check(const GroupFunction& w) {
  return sup_distance(matrix_coefficient(w, w), spectral_measure(w).transform());
}

double polarization_check(const GroupFunction& v, const GroupFunction& w) {
  require_same_group(v.group(), w.group(), "polarization_check");
  const Complex i{0.0, 1.0};
  const GroupFunction iw = i * w;
  const GroupFunction z1 = v + w, z2 = v - w, z3 = v + iw, z4 = v - iw;
  const GroupFunction lhs = 4.0 * matrix_coefficient(w, v);
  GroupFunction rhs = matrix_coefficient(z1, z1);
  rhs -= matrix_coefficient(z2, z2);
  rhs += i * matrix_coefficient(z3, z3);
  rhs -= i * matrix_coefficient(z4, z4);
  return sup_distance(lhs, rhs);
}

}  // namespace sumset
