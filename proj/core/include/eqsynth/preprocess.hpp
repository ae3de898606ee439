#pragma once

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "eqsynth/problems.hpp"

namespace eqsynth {

/// Spectral data of a symmetric PSD constraint: numerical rank, nonzero
/// singular values in descending order, and orthonormal range/null bases.
struct SpectralData {
  Eigen::Index r = 0;
  Eigen::VectorXd sigma;   // descending, length r
  double sigma_min = 0.0;  // sigma(r-1)
  double sigma_max = 0.0;  // sigma(0)
  double kappa_E = 1.0;
  Eigen::MatrixXd V1;  // n x r, range(E)
  Eigen::MatrixXd V2;  // n x (n-r), null(E)
};

enum class ScaleMode { Trace, ColSum, SigmaMax, None };

/// Constraint brought to the normalized form the synthesis assumes: symmetric
/// PSD, homogeneous, largest singular value at most one.
struct PreprocessedProblem {
  Eigen::MatrixXd E_norm;  // n x n symmetric PSD, sigma_max <= 1
  Eigen::VectorXd x_bar;   // feasible point of the original constraint
  double scale = 1.0;      // E_norm = E_sym / scale
  SpectralData spectral;   // of E_norm
  bool was_symmetrized = false;
  bool was_homogenized = false;
  ScaleMode scaling_mode = ScaleMode::None;
};

/// Replace E x = q by the equivalent symmetric PSD system E'E x = E'q.
/// Identity on input that is already symmetric PSD.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> symmetrize(const Eigen::MatrixXd& E_raw,
                                                       const Eigen::VectorXd& q);

/// Minimum-norm feasible point x_bar with E x_bar = q; the returned constraint
/// is the homogeneous (E, 0). Throws InfeasibleError when q is outside range(E).
Eigen::VectorXd homogenize(const Eigen::MatrixXd& E, const Eigen::VectorXd& q);

/// Uniform scaling bringing sigma_max at or below one. Returns (E/c, c).
std::pair<Eigen::MatrixXd, double> scale_constraint(const Eigen::MatrixXd& E,
                                                    ScaleMode mode);

/// Full symmetric eigendecomposition split at rank_tol (< 0 selects the
/// default 1e-10 * sigma_max).
SpectralData spectral_analysis(const Eigen::MatrixXd& E, double rank_tol = -1.0);

enum class RateDiagnosis { OkTheorem, OkDerivationOnly, Violated };

struct RateCondition {
  RateDiagnosis diagnosis;
  double theorem_threshold;     // 2 / kappa_f
  double derivation_threshold;  // 2 / (kappa_f + 1)
};

/// Where the constraint spectrum falls relative to the admissible interval of
/// the synthesized algorithm's rate guarantee.
RateCondition check_rate_condition(double sigma_min, double sigma_max,
                                   const ConvexityProfile& profile);
RateCondition check_rate_condition(const SpectralData& spectral,
                                   const ConvexityProfile& profile);

/// Whole pipeline: symmetrize, homogenize, scale, analyze.
PreprocessedProblem preprocess(const Eigen::MatrixXd& E_raw, const Eigen::VectorXd& q,
                               ScaleMode mode = ScaleMode::SigmaMax);

std::string to_string(ScaleMode mode);
std::string to_string(RateDiagnosis d);

}  // namespace eqsynth
