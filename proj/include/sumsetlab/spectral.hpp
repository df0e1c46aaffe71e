#pragma once

// Fourier analysis on a finite abelian group with normalized Haar measure
// mu(E) = |E| / |G|:
//   f^(chi)  = (1/|G|) sum_x f(x) conj(chi(x))
//   f*g(x)   = (1/|G|) sum_t f(t) g(x - t)
//   <a, b>   = (1/|G|) sum_x a(x) conj(b(x))
//   (U_y w)(x) = w(x - y)

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sumsetlab/abelian_core.hpp"
#include "sumsetlab/bitset.hpp"

namespace sumset {

using Complex = std::complex<double>;

class GroupFunction {
 public:
  /// Zero function.
  explicit GroupFunction(const FiniteAbelianGroup& g);
  /// Throws StructuralError when values.size() != |G|.
  GroupFunction(const FiniteAbelianGroup& g, std::vector<Complex> values);

  static GroupFunction indicator(const FiniteAbelianGroup& g, const Bitset& members);
  static GroupFunction constant(const FiniteAbelianGroup& g, Complex c);
  static GroupFunction delta(const FiniteAbelianGroup& g, std::size_t at);
  static GroupFunction character(const FiniteAbelianGroup& g, std::size_t chi);

  const FiniteAbelianGroup& group() const noexcept { return group_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }
  Complex operator()(std::size_t x) const { return values_[x]; }
  Complex& operator[](std::size_t x) { return values_[x]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// (1/|G|) sum_x f(x).
  Complex integral() const;

  GroupFunction& operator+=(const GroupFunction& o);
  GroupFunction& operator-=(const GroupFunction& o);
  GroupFunction& operator*=(Complex c);
  friend GroupFunction operator+(GroupFunction a, const GroupFunction& b) { return a += b; }
  friend GroupFunction operator-(GroupFunction a, const GroupFunction& b) { return a -= b; }
  friend GroupFunction operator*(Complex c, GroupFunction a) { return a *= c; }

 private:
  FiniteAbelianGroup group_;
  std::vector<Complex> values_;
};

/// Fourier coefficients indexed by character index.
struct Spectrum {
  FiniteAbelianGroup group;
  std::vector<Complex> coefficients;

  /// sum_chi |f^(chi)|^2.
  double energy() const;
};

/// Point masses sigma({chi}) on the dual group.
struct SpectralMeasure {
  FiniteAbelianGroup group;
  std::vector<double> weights;

  double total_mass() const;
  /// sigma^(y) = sum_chi sigma({chi}) chi(y), for every y.
  GroupFunction transform() const;
};

Spectrum dft(const GroupFunction& f);
/// f(x) = sum_chi f^(chi) chi(x).
GroupFunction inverse_dft(const Spectrum& s);

/// FFT-path convolution. Throws StructuralError on group mismatch.
GroupFunction convolve(const GroupFunction& f, const GroupFunction& g);
/// O(|G|^2) convolution straight from the definition.
GroupFunction convolve_direct(const GroupFunction& f, const GroupFunction& g);

/// (1/|G|) sum_x a(x) conj(b(x)).
Complex inner_product(const GroupFunction& a, const GroupFunction& b);

/// sup_x |f*g(x) - sum_chi f^(chi) g^(chi) chi(x)|, with f*g from the direct sum.
double convolution_expansion_check(const GroupFunction& f, const GroupFunction& g);

/// |sum_chi f^(chi) conj(g^(chi)) - <f, g>|.
double parseval_check(const GroupFunction& f, const GroupFunction& g);

/// y -> <v, U_y w>.
GroupFunction matrix_coefficient(const GroupFunction& w, const GroupFunction& v);

/// sigma({chi}) = |w^(chi)|^2.
SpectralMeasure spectral_measure(const GroupFunction& w);

/// sup_y |phi_{w,w}(y) - sigma^(y)|.
double bochner_check(const GroupFunction& w);

/// sup_y |4 phi_{v,w}(y) - (phi_{z1,z1} - phi_{z2,z2} + i phi_{z3,z3} - i phi_{z4,z4})(y)|,
/// z1 = v+w, z2 = v-w, z3 = v+iw, z4 = v-iw.
double polarization_check(const GroupFunction& v, const GroupFunction& w);

double sup_distance(const GroupFunction& a, const GroupFunction& b);

}  // namespace sumset
