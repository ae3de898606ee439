#include "eqsynth/problems.hpp"

#include <algorithm>
#include <cmath>

#include "eqsynth/rng.hpp"

namespace eqsynth {

namespace {

// Interior values of the spectrum on [lo, hi], endpoints pinned exactly.
Eigen::VectorXd draw_spectrum(Eigen::Index count, double lo, double hi, SpectrumLaw law,
                              SplitMix64& rng) {
  Eigen::VectorXd s(count);
  if (count == 0) return s;
  s(0) = lo;
  if (count == 1) return s;
  s(count - 1) = hi;
  for (Eigen::Index i = 1; i + 1 < count; ++i) {
    const double u = rng.uniform();
    s(i) = (law == SpectrumLaw::LogUniform)
               ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)))
               : lo + u * (hi - lo);
  }
  std::sort(s.data() + 1, s.data() + count - 1);
  return s;
}

}  // namespace

QuadraticInstance generate_quadratic(Eigen::Index n, double m, double L, SpectrumLaw law,
                                     std::uint64_t seed) {
  if (n < 2) throw ParameterError("generate_quadratic: n must be >= 2");
  ConvexityProfile profile{m, L};
  profile.validate();

  SplitMix64 rng(seed);
  const Eigen::VectorXd lambda = draw_spectrum(n, m, L, law, rng);
  const Eigen::MatrixXd u = random_orthogonal(n, rng);
  Eigen::MatrixXd q = u * lambda.asDiagonal() * u.transpose();
  q = 0.5 * (q + q.transpose());  // exact symmetry

  QuadraticInstance inst;
  inst.Q = std::move(q);
  inst.p = rng.normal_vector(n);
  inst.profile = profile;
  return inst;
}

Eigen::MatrixXd generate_constraint(Eigen::Index n, Eigen::Index r, double sigma_min,
                                    double sigma_max, std::uint64_t seed) {
  if (n < 2 || r < 1 || r > n)
    throw ParameterError("generate_constraint: need n >= 2 and 1 <= r <= n");
  if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min))
    throw ParameterError("generate_constraint: need 0 < sigma_min <= sigma_max");

  SplitMix64 rng(seed);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  s.head(r) = draw_spectrum(r, sigma_min, sigma_max, SpectrumLaw::LogUniform, rng);
  const Eigen::MatrixXd v = random_orthogonal(n, rng);
  Eigen::MatrixXd e = v * s.asDiagonal() * v.transpose();
  return 0.5 * (e + e.transpose());
}

KktSolution kkt_solve(const QuadraticInstance& instance, const Eigen::MatrixXd& E,
                      const Eigen::VectorXd& q) {
  const Eigen::Index n = instance.dim();
  const Eigen::Index d = E.rows();
  if (E.cols() != n || q.size() != d)
    throw ParameterError("kkt_solve: constraint dimensions inconsistent");

  // Block elimination through the Schur complement S = E Q^{-1} E'. A direct
  // rank-revealing solve of the full KKT matrix is fragile here: its genuine
  // smallest singular values scale like sigma_min(E)^2 / L and sink below any
  // pivot threshold keyed to the (much larger) Q block. S keeps the numerical
  // zeros of a rank-deficient E cleanly separated from its true spectrum.
  Eigen::LLT<Eigen::MatrixXd> llt(instance.Q);
  if (llt.info() != Eigen::Success)
    throw ContractError("kkt_solve: objective Hessian is not positive definite");
  const Eigen::MatrixXd qinv_et = llt.solve(E.transpose());
  const Eigen::VectorXd qinv_p = llt.solve(instance.p);
  const Eigen::MatrixXd s = E * qinv_et;
  const Eigen::VectorXd rhs_y = -(E * qinv_p) - q;

  // Minimum-norm multiplier via a truncated eigendecomposition of S.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double lambda_max = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  const double cut = 1e-12 * lambda_max;
  Eigen::VectorXd coeffs = es.eigenvectors().transpose() * rhs_y;
  for (Eigen::Index i = 0; i < d; ++i)
    coeffs(i) = ev(i) > cut ? coeffs(i) / ev(i) : 0.0;

  KktSolution out;
  out.multiplier = es.eigenvectors() * coeffs;
  out.x = -qinv_p - qinv_et * out.multiplier;

  const double stationarity =
      (instance.Q * out.x + instance.p + E.transpose() * out.multiplier).norm();
  if (stationarity > 1e-8 * (1.0 + instance.p.norm() + (instance.Q * out.x).norm()))
    throw InfeasibleError("kkt_solve: stationarity residual beyond tolerance");

  const double feas = (E * out.x - q).norm();
  if (feas > 1e-9 * (1.0 + q.norm()))
    throw InfeasibleError("kkt_solve: constraint residual beyond tolerance");
  return out;
}

}  // namespace eqsynth
