#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eqsynth/solvers.hpp"

namespace eqsynth {

/// Empirical linear-convergence fit: residual_k ~ M * residual_0 * rho^k.
struct RateFit {
  double rho_emp = 0.0;
  double M_emp = 0.0;
  long k_start = 0;
  long k_end = 0;
  double r_squared = 0.0;
};

struct FitPolicy {
  bool auto_window = true;
  long k_start = 0;  // used when auto_window is false
  long k_end = 0;
  double upper_rel = 1e-2;   // auto window: residual <= upper_rel * residual_0
  double lower_rel = 1e-12;  // and residual >= lower_rel * residual_0
  double trim_fraction = 0.1;

  static FitPolicy window(long k_start, long k_end) {
    FitPolicy p;
    p.auto_window = false;
    p.k_start = k_start;
    p.k_end = k_end;
    return p;
  }
};

/// Least-squares line on (k, log residual) over the selected window. Throws
/// InsufficientDataError below 20 usable points.
RateFit fit_rate(const RunRecord& record, const FitPolicy& policy = {});

/// Exact affine update x_{k+1} = T x_k + offset of a quadratic-case run,
/// with the spectral radius of T. The synthesized recursion carries n - r
/// marginal memory modes in the constraint null space that never reach the
/// iterate; those are excluded from the reported radius (and counted).
struct IterationMatrix {
  Eigen::MatrixXd T;
  Eigen::VectorXd offset;
  double spectral_radius = 0.0;
  int marginal_modes_excluded = 0;
};

struct IterationMatrixOptions {
  double alpha1 = 0.0, alpha2 = 0.0;  // GDA only; 0 selects the tuned defaults
  bool eta_one_minus_rho = false;
};

IterationMatrix iteration_matrix(Algorithm algorithm, const QuadraticInstance& quad,
                                 const PreprocessedProblem& pre,
                                 const IterationMatrixOptions& options = {});

struct ComparisonRow {
  std::string label;
  RateFit fit;
  double rho_theory = 0.0;
  // First iteration reaching each relative-residual threshold; -1 when never.
  long k_to_1e3 = -1;
  long k_to_1e6 = -1;
  long k_to_1e9 = -1;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  Eigen::MatrixXd pairwise_rate_diff;  // |rho_emp_i - rho_emp_j|

  std::string to_csv() const;
  std::string to_text() const;
};

struct LabelledRecord {
  std::string label;
  const RunRecord* record;
  FitPolicy fit_policy = {};
};

ComparisonTable compare(const std::vector<LabelledRecord>& records);

}  // namespace eqsynth
