#include "eqsynth/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "eqsynth/errors.hpp"

namespace eqsynth {

namespace {
constexpr double kTrimRelTol = 1e-14;
}

Polynomial::Polynomial(std::initializer_list<double> ascending)
    : coef_(ascending) {
  if (coef_.empty()) coef_ = {0.0};
  trim();
}

Polynomial::Polynomial(std::vector<double> ascending) : coef_(std::move(ascending)) {
  if (coef_.empty()) coef_ = {0.0};
  trim();
}

void Polynomial::trim() {
  double maxc = 0.0;
  for (double c : coef_) maxc = std::max(maxc, std::abs(c));
  if (maxc == 0.0) {
    coef_ = {0.0};
    return;
  }
  while (coef_.size() > 1 && std::abs(coef_.back()) <= kTrimRelTol * maxc)
    coef_.pop_back();
}

bool Polynomial::is_zero() const {
  return coef_.size() == 1 && coef_[0] == 0.0;
}

double Polynomial::operator[](int k) const {
  if (k < 0 || k >= static_cast<int>(coef_.size())) return 0.0;
  return coef_[static_cast<std::size_t>(k)];
}

double Polynomial::eval(double x) const {
  double r = 0.0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) r = r * x + *it;
  return r;
}

Complex Polynomial::eval(Complex z) const {
  Complex r = 0.0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) r = r * z + *it;
  return r;
}

std::vector<Complex> Polynomial::roots() const {
  const int n = degree();
  if (is_zero() || n == 0) return {};
  if (n == 1) return {Complex(-coef_[0] / coef_[1], 0.0)};
  if (n == 2) {
    const double a = coef_[2], b = coef_[1], c = coef_[0];
    const Complex disc = std::sqrt(Complex(b * b - 4.0 * a * c, 0.0));
    // Stable quadratic formula: larger-magnitude root first, mate via product.
    const Complex qq = (b >= 0.0) ? (-b - disc) * 0.5 : (-b + disc) * 0.5;
    if (std::abs(qq) < std::numeric_limits<double>::min())
      return {Complex(0.0, 0.0), Complex(-b / a, 0.0)};
    return {qq / a, c / qq};
  }
  // Companion matrix of the monic polynomial.
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -coef_[static_cast<std::size_t>(i)] / coef_.back();
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

Polynomial Polynomial::from_roots(const std::vector<Complex>& roots, double leading) {
  std::vector<Complex> c{Complex(1.0, 0.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] -= r * c[i];
      next[i + 1] += c[i];
    }
    c = std::move(next);
  }
  std::vector<double> real(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) real[i] = leading * c[i].real();
  return Polynomial(std::move(real));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> c(std::max(coef_.size(), o.coef_.size()), 0.0);
  for (std::size_t i = 0; i < coef_.size(); ++i) c[i] += coef_[i];
  for (std::size_t i = 0; i < o.coef_.size(); ++i) c[i] += o.coef_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<double> c(std::max(coef_.size(), o.coef_.size()), 0.0);
  for (std::size_t i = 0; i < coef_.size(); ++i) c[i] += coef_[i];
  for (std::size_t i = 0; i < o.coef_.size(); ++i) c[i] -= o.coef_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial{};
  std::vector<double> c(coef_.size() + o.coef_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coef_.size(); ++i)
    for (std::size_t j = 0; j < o.coef_.size(); ++j) c[i + j] += coef_[i] * o.coef_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> c = coef_;
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

RationalTF::RationalTF(Polynomial num, Polynomial den, double cancel_tol)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw ContractError("RationalTF: zero denominator");
  if (num_.is_zero()) {
    num_ = Polynomial{0.0};
    den_ = Polynomial{1.0};
    return;
  }
  if (num_.degree() > 0 && den_.degree() > 0) {
    std::vector<Complex> nr = num_.roots();
    std::vector<Complex> dr = den_.roots();
    std::vector<bool> used(nr.size(), false);
    std::vector<Complex> dr_kept;
    bool cancelled = false;
    for (const Complex& d : dr) {
      int best = -1;
      double best_dist = cancel_tol;
      for (std::size_t i = 0; i < nr.size(); ++i) {
        if (used[i]) continue;
        const double dist = std::abs(nr[i] - d);
        if (dist <= best_dist) {
          best_dist = dist;
          best = static_cast<int>(i);
        }
      }
      if (best >= 0) {
        used[static_cast<std::size_t>(best)] = true;
        cancelled = true;
      } else {
        dr_kept.push_back(d);
      }
    }
    if (cancelled) {
      std::vector<Complex> nr_kept;
      for (std::size_t i = 0; i < nr.size(); ++i)
        if (!used[i]) nr_kept.push_back(nr[i]);
      num_ = Polynomial::from_roots(nr_kept, num_.leading());
      den_ = Polynomial::from_roots(dr_kept, den_.leading());
    }
  }
  const double lead = den_.leading();
  num_ = num_ * (1.0 / lead);
  den_ = den_ * (1.0 / lead);
}

double RationalTF::eval_at_inf() const {
  if (strictly_proper()) return 0.0;
  if (num_.degree() == den_.degree()) return num_.leading() / den_.leading();
  return num_.leading() > 0.0 ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
}

RationalTF RationalTF::operator+(const RationalTF& o) const {
  return RationalTF(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalTF RationalTF::operator-(const RationalTF& o) const {
  return RationalTF(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalTF RationalTF::operator*(const RationalTF& o) const {
  return RationalTF(num_ * o.num_, den_ * o.den_);
}

RationalTF RationalTF::operator*(double s) const {
  return RationalTF(num_ * s, den_);
}

RationalTF RationalTF::inverse() const {
  if (num_.is_zero()) throw ContractError("RationalTF: inverse of zero");
  return RationalTF(den_, num_);
}

std::vector<double> RationalTF::impulse_response(int count) const {
  if (!proper()) throw ContractError("RationalTF: impulse response of improper function");
  const int p = den_.degree();
  // Rewrite in powers of z^-1: reverse coefficients, padding num to degree p.
  std::vector<double> nb(static_cast<std::size_t>(p) + 1, 0.0);
  std::vector<double> db(static_cast<std::size_t>(p) + 1, 0.0);
  for (int k = 0; k <= p; ++k) {
    nb[static_cast<std::size_t>(k)] = num_[p - k];
    db[static_cast<std::size_t>(k)] = den_[p - k];
  }
  std::vector<double> h(static_cast<std::size_t>(std::max(count, 0)), 0.0);
  for (int k = 0; k < count; ++k) {
    double v = (k <= p) ? nb[static_cast<std::size_t>(k)] : 0.0;
    for (int j = 1; j <= std::min(k, p); ++j)
      v -= db[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(k - j)];
    h[static_cast<std::size_t>(k)] = v / db[0];
  }
  return h;
}

}  // namespace eqsynth
