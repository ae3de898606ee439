#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace eqsynth {

using Complex = std::complex<double>;

/// Dense real polynomial, coefficients stored in ascending degree order.
/// Degrees stay small here (the synthesis never goes past degree four), so
/// everything is done with plain coefficient arithmetic.
class Polynomial {
 public:
  Polynomial() : coef_{0.0} {}
  Polynomial(std::initializer_list<double> ascending);
  explicit Polynomial(std::vector<double> ascending);

  static Polynomial constant(double c) { return Polynomial{c}; }
  static Polynomial z() { return Polynomial{0.0, 1.0}; }

  /// Degree after trimming; the zero polynomial reports degree 0.
  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  bool is_zero() const;
  double leading() const { return coef_.back(); }

  /// Coefficient of z^k, zero beyond the stored degree.
  double operator[](int k) const;
  const std::vector<double>& coefficients() const { return coef_; }

  double eval(double x) const;
  Complex eval(Complex z) const;

  /// All complex roots. Closed form for degrees one and two, companion-matrix
  /// eigenvalues above that.
  std::vector<Complex> roots() const;

  /// Rebuild a real polynomial from a conjugate-closed root set.
  static Polynomial from_roots(const std::vector<Complex>& roots, double leading);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const { return *this * -1.0; }

 private:
  void trim();
  std::vector<double> coef_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

/// Real-coefficient rational function of z. Construction cancels common roots
/// of numerator and denominator (paired within an absolute tolerance) and
/// normalizes the denominator to a monic polynomial.
class RationalTF {
 public:
  RationalTF() : num_{0.0}, den_{1.0} {}
  RationalTF(Polynomial num, Polynomial den, double cancel_tol = 1e-9);

  static RationalTF constant(double c) {
    return RationalTF(Polynomial::constant(c), Polynomial::constant(1.0));
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  Complex eval(Complex z) const { return num_.eval(z) / den_.eval(z); }

  /// Limit at z -> infinity: 0 when strictly proper, the leading-coefficient
  /// ratio when biproper, +/-inf when improper.
  double eval_at_inf() const;

  bool strictly_proper() const { return num_.is_zero() || num_.degree() < den_.degree(); }
  bool proper() const { return num_.is_zero() || num_.degree() <= den_.degree(); }
  bool is_zero() const { return num_.is_zero(); }

  std::vector<Complex> poles() const { return den_.roots(); }
  std::vector<Complex> zeros() const { return num_.roots(); }

  RationalTF operator+(const RationalTF& o) const;
  RationalTF operator-(const RationalTF& o) const;
  RationalTF operator*(const RationalTF& o) const;
  RationalTF operator*(double s) const;
  RationalTF inverse() const;

  /// First `count` impulse-response samples (power series in z^-1). Requires a
  /// proper transfer function.
  std::vector<double> impulse_response(int count) const;

 private:
  Polynomial num_, den_;
};

}  // namespace eqsynth
