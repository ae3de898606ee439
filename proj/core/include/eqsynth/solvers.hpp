#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eqsynth/preprocess.hpp"
#include "eqsynth/problems.hpp"
#include "eqsynth/synthesis.hpp"

namespace eqsynth {

enum class Algorithm { Synthesized, Gda, GdaIncremental };

std::string to_string(Algorithm a);

/// Application of the normalized constraint E, either as a dense matrix or as
/// a matrix-free operator (keeps the door open for E'E products without
/// forming E'E).
class ConstraintOperator {
 public:
  explicit ConstraintOperator(Eigen::MatrixXd E) : dense_(std::move(E)), n_(dense_->rows()) {}
  ConstraintOperator(std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply,
                     Eigen::Index n)
      : apply_(std::move(apply)), n_(n) {}

  Eigen::Index size() const { return n_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    return dense_ ? Eigen::VectorXd(*dense_ * v) : apply_(v);
  }

 private:
  std::optional<Eigen::MatrixXd> dense_;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_;
  Eigen::Index n_;
};

/// The synthesized single-loop recursion:
///   u^k     = x^k - eta grad
///   y^k     = W (y^{k-1} + u^k) - rho^2 u^{k-1},   W = I - E
///   x^{k+1} = rho^2 x^k + y^k - y^{k-1}
/// with y^{-1} = u^{-1} = 0. One W application and one gradient per step.
class SynthSolver {
 public:
  /// y0 / u0 default to zero; nonzero values let a caller start the memory
  /// buffers on a known trajectory (e.g. the stationary one through x*).
  SynthSolver(ConstraintOperator E, double rho, double eta, Eigen::VectorXd x0,
              std::optional<Eigen::VectorXd> y0 = std::nullopt,
              std::optional<Eigen::VectorXd> u0 = std::nullopt);

  const Eigen::VectorXd& x() const { return x_; }
  long iterations() const { return k_; }
  long matvecs() const { return matvecs_; }

  void step(const Eigen::VectorXd& grad);

 private:
  ConstraintOperator E_;
  double rho2_, eta_;
  Eigen::VectorXd x_, y_prev_, u_prev_;
  long k_ = 0;
  long matvecs_ = 0;
};

enum class GdaMode { Simultaneous, Incremental };

/// Gradient descent-ascent on the Lagrangian; the incremental variant updates
/// the dual with the fresh primal iterate.
class GdaSolver {
 public:
  GdaSolver(Eigen::MatrixXd E, double alpha1, double alpha2, GdaMode mode,
            Eigen::VectorXd x0);

  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  long iterations() const { return k_; }
  long matvecs() const { return matvecs_; }

  void step(const Eigen::VectorXd& grad);

 private:
  Eigen::MatrixXd E_;
  double alpha1_, alpha2_;
  GdaMode mode_;
  Eigen::VectorXd x_, y_;
  long k_ = 0;
  long matvecs_ = 0;
};

struct StopRule {
  enum class Kind { MaxIter, ResidualBelow, Stalled };
  Kind kind = Kind::MaxIter;
  double eps = 0.0;
  int window = 0;

  static StopRule max_iter() { return {}; }
  static StopRule residual_below(double eps) { return {Kind::ResidualBelow, eps, 0}; }
  static StopRule stalled(double eps, int window) { return {Kind::Stalled, eps, window}; }
};

struct RunOptions {
  Algorithm algorithm = Algorithm::Synthesized;
  long max_iter = 1000;
  std::optional<Eigen::VectorXd> x0;  // defaults to zero
  std::optional<double> alpha1, alpha2;  // GDA overrides
  bool eta_one_minus_rho = false;    // use 1 - rho instead of 2/(L+m)
  bool force = false;                    // bypass the rate-condition gate
};

struct RunRecord {
  std::string algorithm;
  Eigen::VectorXd x_final;  // last iterate, in original coordinates
  std::vector<double> residuals;      // ||x^k - x*|| when x* known, else step norm
  std::vector<double> residuals_rel;  // residuals / ||x*|| (absolute when x* = 0)
  bool has_x_star = false;
  long grad_calls = 0;
  long matvecs = 0;
  double wall_seconds = 0.0;
  std::string stop_reason;
  double alpha1 = 0.0, alpha2 = 0.0;
  double rho = 0.0, eta = 0.0;
  double rho_theory = 0.0;  // rho_syn or rho_gda for the instance

  long iterations() const { return static_cast<long>(residuals.size()) - 1; }
};

/// Uniform run loop on the normalized homogeneous problem; iterates are mapped
/// back through x_bar before residuals are logged. For quadratic objectives
/// the ground truth comes from kkt_solve on the original data.
RunRecord run(const Problem& problem, const PreprocessedProblem& pre,
              const RunOptions& options, const StopRule& stop = StopRule::max_iter());

}  // namespace eqsynth
