#include "eqsynth/preprocess.hpp"

#include <cmath>

namespace eqsynth {

namespace {

bool is_symmetric_psd(const Eigen::MatrixXd& E) {
  if (E.rows() != E.cols()) return false;
  const double scale = 1.0 + E.cwiseAbs().maxCoeff();
  if ((E - E.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (E + E.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const double lambda_max = es.eigenvalues().cwiseAbs().maxCoeff();
  return es.eigenvalues().minCoeff() >= -1e-12 * (1.0 + lambda_max);
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> symmetrize(const Eigen::MatrixXd& E_raw,
                                                       const Eigen::VectorXd& q) {
  if (E_raw.cwiseAbs().maxCoeff() == 0.0)
    throw ParameterError("symmetrize: zero constraint matrix");
  if (q.size() != E_raw.rows())
    throw ParameterError("symmetrize: q dimension mismatch");
  if (is_symmetric_psd(E_raw)) return {E_raw, q};
  return {E_raw.transpose() * E_raw, E_raw.transpose() * q};
}

Eigen::VectorXd homogenize(const Eigen::MatrixXd& E, const Eigen::VectorXd& q) {
  if (q.size() != E.rows()) throw ParameterError("homogenize: q dimension mismatch");
  if (q.isZero(0.0)) return Eigen::VectorXd::Zero(E.cols());

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(E);
  cod.setThreshold(1e-10);
  const Eigen::VectorXd x_bar = cod.solve(q);
  if ((E * x_bar - q).norm() > 1e-9 * (1.0 + q.norm()))
    throw InfeasibleError("homogenize: q is not in the range of E");
  return x_bar;
}

std::pair<Eigen::MatrixXd, double> scale_constraint(const Eigen::MatrixXd& E,
                                                    ScaleMode mode) {
  if (E.cwiseAbs().maxCoeff() == 0.0)
    throw ParameterError("scale_constraint: zero constraint matrix");
  double c = 1.0;
  switch (mode) {
    case ScaleMode::Trace:
      c = E.trace();
      break;
    case ScaleMode::ColSum:
      c = E.cwiseAbs().colwise().sum().maxCoeff();
      break;
    case ScaleMode::SigmaMax: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E, Eigen::EigenvaluesOnly);
      c = es.eigenvalues().cwiseAbs().maxCoeff();
      break;
    }
    case ScaleMode::None:
      return {E, 1.0};
  }
  if (!(c > 0.0)) throw ParameterError("scale_constraint: nonpositive scale factor");
  return {E / c, c};
}

SpectralData spectral_analysis(const Eigen::MatrixXd& E, double rank_tol) {
  if (E.rows() != E.cols()) throw ParameterError("spectral_analysis: matrix not square");
  const double scale = 1.0 + E.cwiseAbs().maxCoeff();
  if ((E - E.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ContractError("spectral_analysis: matrix not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (E + E.transpose()));
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const Eigen::Index n = E.rows();
  const double sigma_max = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -1e-9 * (1.0 + sigma_max))
    throw ContractError("spectral_analysis: matrix not positive semidefinite");
  if (rank_tol < 0.0) rank_tol = 1e-10 * sigma_max;

  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (ev(i) > rank_tol) ++r;

  SpectralData out;
  out.r = r;
  out.sigma.resize(r);
  out.V1.resize(n, r);
  out.V2.resize(n, n - r);
  // Eigenvalues come ascending; store singular values descending.
  for (Eigen::Index i = 0; i < r; ++i) {
    out.sigma(i) = ev(n - 1 - i);
    out.V1.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  for (Eigen::Index i = 0; i < n - r; ++i) out.V2.col(i) = es.eigenvectors().col(i);
  out.sigma_max = r > 0 ? out.sigma(0) : 0.0;
  out.sigma_min = r > 0 ? out.sigma(r - 1) : 0.0;
  out.kappa_E = r > 0 ? out.sigma_max / out.sigma_min : 1.0;
  return out;
}

RateCondition check_rate_condition(double sigma_min, double sigma_max,
                                   const ConvexityProfile& profile) {
  profile.validate();
  const double kf = profile.kappa_f();
  RateCondition out{RateDiagnosis::Violated, 2.0 / kf, 2.0 / (kf + 1.0)};
  if (sigma_max > 1.0 + 1e-12) return out;
  if (sigma_min > out.theorem_threshold)
    out.diagnosis = RateDiagnosis::OkTheorem;
  else if (sigma_min > out.derivation_threshold)
    out.diagnosis = RateDiagnosis::OkDerivationOnly;
  return out;
}

RateCondition check_rate_condition(const SpectralData& spectral,
                                   const ConvexityProfile& profile) {
  return check_rate_condition(spectral.sigma_min, spectral.sigma_max, profile);
}

PreprocessedProblem preprocess(const Eigen::MatrixXd& E_raw, const Eigen::VectorXd& q,
                               ScaleMode mode) {
  PreprocessedProblem out;
  auto [e_sym, q_sym] = symmetrize(E_raw, q);
  out.was_symmetrized =
      e_sym.rows() != E_raw.rows() || (e_sym - E_raw).cwiseAbs().maxCoeff() != 0.0;
  out.x_bar = homogenize(e_sym, q_sym);
  out.was_homogenized = !q_sym.isZero(0.0);
  auto [e_scaled, c] = scale_constraint(e_sym, mode);
  out.E_norm = std::move(e_scaled);
  out.scale = c;
  out.scaling_mode = mode;
  out.spectral = spectral_analysis(out.E_norm);
  return out;
}

std::string to_string(ScaleMode mode) {
  switch (mode) {
    case ScaleMode::Trace: return "trace";
    case ScaleMode::ColSum: return "colsum";
    case ScaleMode::SigmaMax: return "sigma_max";
    case ScaleMode::None: return "none";
  }
  return "unknown";
}

std::string to_string(RateDiagnosis d) {
  switch (d) {
    case RateDiagnosis::OkTheorem: return "ok_theorem";
    case RateDiagnosis::OkDerivationOnly: return "ok_derivation_only";
    case RateDiagnosis::Violated: return "violated";
  }
  return "unknown";
}

}  // namespace eqsynth
