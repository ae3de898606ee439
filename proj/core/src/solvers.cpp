#include "eqsynth/solvers.hpp"

#include <chrono>
#include <cmath>

namespace eqsynth {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Synthesized: return "synth";
    case Algorithm::Gda: return "gda";
    case Algorithm::GdaIncremental: return "gda-inc";
  }
  return "unknown";
}

SynthSolver::SynthSolver(ConstraintOperator E, double rho, double eta, Eigen::VectorXd x0,
                         std::optional<Eigen::VectorXd> y0,
                         std::optional<Eigen::VectorXd> u0)
    : E_(std::move(E)),
      rho2_(rho * rho),
      eta_(eta),
      x_(std::move(x0)),
      y_prev_(y0 ? std::move(*y0) : Eigen::VectorXd::Zero(E_.size())),
      u_prev_(u0 ? std::move(*u0) : Eigen::VectorXd::Zero(E_.size())) {
  if (x_.size() != E_.size() || y_prev_.size() != E_.size() || u_prev_.size() != E_.size())
    throw ParameterError("SynthSolver: state dimension mismatch");
}

void SynthSolver::step(const Eigen::VectorXd& grad) {
  if (grad.size() != x_.size())
    throw ParameterError("SynthSolver::step: gradient dimension mismatch");
  const Eigen::VectorXd u = x_ - eta_ * grad;
  const Eigen::VectorXd v = y_prev_ + u;
  const Eigen::VectorXd y = v - E_.apply(v) - rho2_ * u_prev_;  // W v = v - E v
  ++matvecs_;
  const Eigen::VectorXd x_next = rho2_ * x_ + y - y_prev_;
  if (!x_next.allFinite()) throw DivergenceError("SynthSolver: non-finite iterate", k_);
  x_ = x_next;
  y_prev_ = y;
  u_prev_ = u;
  ++k_;
}

GdaSolver::GdaSolver(Eigen::MatrixXd E, double alpha1, double alpha2, GdaMode mode,
                     Eigen::VectorXd x0)
    : E_(std::move(E)),
      alpha1_(alpha1),
      alpha2_(alpha2),
      mode_(mode),
      x_(std::move(x0)),
      y_(Eigen::VectorXd::Zero(E_.rows())) {
  if (x_.size() != E_.cols())
    throw ParameterError("GdaSolver: x0 dimension mismatch");
}

void GdaSolver::step(const Eigen::VectorXd& grad) {
  if (grad.size() != x_.size())
    throw ParameterError("GdaSolver::step: gradient dimension mismatch");
  const Eigen::VectorXd x_next = x_ - alpha1_ * (grad + E_.transpose() * y_);
  // One E / E' pair per iteration is the counted unit.
  ++matvecs_;
  y_ += alpha2_ * (E_ * (mode_ == GdaMode::Incremental ? x_next : x_));
  if (!x_next.allFinite() || !y_.allFinite())
    throw DivergenceError("GdaSolver: non-finite iterate", k_);
  x_ = x_next;
  ++k_;
}

RunRecord run(const Problem& problem, const PreprocessedProblem& pre,
              const RunOptions& options, const StopRule& stop) {
  const Objective& objective = problem.objective;
  const ConvexityProfile& profile = objective.profile();
  const Eigen::Index n = objective.dim();
  const SpectralData& spectral = pre.spectral;

  if (options.algorithm == Algorithm::Synthesized && !options.force) {
    const RateCondition rc = check_rate_condition(spectral, profile);
    if (rc.diagnosis == RateDiagnosis::Violated)
      throw RateConditionError(
          "run: constraint spectrum violates the synthesis rate condition "
          "(thresholds 2/kappa_f = " + std::to_string(rc.theorem_threshold) +
              ", 2/(kappa_f+1) = " + std::to_string(rc.derivation_threshold) +
              "); pass force to override",
          rc.theorem_threshold, rc.derivation_threshold);
  }

  // Ground truth for residuals when the objective is quadratic.
  std::optional<Eigen::VectorXd> x_star;
  if (objective.is_quadratic())
    x_star = kkt_solve(objective.quadratic(), problem.E_raw, problem.q).x;

  const Eigen::VectorXd x0 = options.x0.value_or(Eigen::VectorXd::Zero(n));
  const Eigen::VectorXd x0_shifted = x0 - pre.x_bar;  // homogenized coordinates

  RunRecord rec;
  rec.algorithm = to_string(options.algorithm);
  rec.has_x_star = x_star.has_value();
  const double x_star_norm = x_star ? x_star->norm() : 0.0;

  const double rho = (profile.L - profile.m) / (profile.L + profile.m);
  const double eta = options.eta_one_minus_rho ? (1.0 - rho)
                                                   : 2.0 / (profile.L + profile.m);
  rec.rho = rho;
  rec.eta = eta;

  auto shifted_gradient = [&](const Eigen::VectorXd& xt) {
    return objective.gradient(xt + pre.x_bar);
  };

  auto log_residual = [&](const Eigen::VectorXd& xt, const Eigen::VectorXd& xt_prev,
                          bool first) {
    double r;
    if (x_star)
      r = (xt + pre.x_bar - *x_star).norm();
    else
      r = first ? xt.norm() : (xt - xt_prev).norm();
    rec.residuals.push_back(r);
    rec.residuals_rel.push_back(x_star_norm > 0.0 ? r / x_star_norm : r);
  };

  const auto t0 = std::chrono::steady_clock::now();
  rec.stop_reason = "max_iter";

  auto should_stop = [&](long k) {
    const double r_rel = rec.residuals_rel.back();
    switch (stop.kind) {
      case StopRule::Kind::ResidualBelow:
        if (r_rel <= stop.eps) {
          rec.stop_reason = "residual_below";
          return true;
        }
        return false;
      case StopRule::Kind::Stalled: {
        if (k < stop.window) return false;
        const double r_old =
            rec.residuals[static_cast<std::size_t>(k - stop.window)];
        if (std::abs(rec.residuals.back() - r_old) <= stop.eps * (1.0 + r_old)) {
          rec.stop_reason = "stalled";
          return true;
        }
        return false;
      }
      case StopRule::Kind::MaxIter:
        return false;
    }
    return false;
  };

  auto guard_divergence = [&](long k) {
    const double r0 = rec.residuals.front();
    if (rec.residuals.back() > 1e12 * (1.0 + r0))
      throw DivergenceError("run: residual exceeded the divergence guard", k);
  };

  if (options.algorithm == Algorithm::Synthesized) {
    rec.rho_theory = rho_syn(profile.kappa_f());
    SynthSolver solver(ConstraintOperator(pre.E_norm), rho, eta, x0_shifted);
    Eigen::VectorXd prev = x0_shifted;
    log_residual(solver.x(), prev, true);
    for (long k = 0; k < options.max_iter; ++k) {
      prev = solver.x();
      solver.step(shifted_gradient(solver.x()));
      ++rec.grad_calls;
      log_residual(solver.x(), prev, false);
      guard_divergence(k + 1);
      if (should_stop(k + 1)) break;
    }
    rec.matvecs = solver.matvecs();
    rec.x_final = solver.x() + pre.x_bar;
  } else {
    const double kappa_E = spectral.kappa_E;
    const GdaStepsizes defaults =
        gda_stepsizes(profile, spectral.sigma_max > 0.0 ? spectral.sigma_max : 1.0,
                      kappa_E);
    rec.alpha1 = options.alpha1.value_or(defaults.alpha1);
    rec.alpha2 = options.alpha2.value_or(defaults.alpha2);
    rec.rho_theory = rho_gda(profile.kappa_f(), kappa_E);
    const GdaMode mode = options.algorithm == Algorithm::GdaIncremental
                             ? GdaMode::Incremental
                             : GdaMode::Simultaneous;
    GdaSolver solver(pre.E_norm, rec.alpha1, rec.alpha2, mode, x0_shifted);
    Eigen::VectorXd prev = x0_shifted;
    log_residual(solver.x(), prev, true);
    for (long k = 0; k < options.max_iter; ++k) {
      prev = solver.x();
      solver.step(shifted_gradient(solver.x()));
      ++rec.grad_calls;
      log_residual(solver.x(), prev, false);
      guard_divergence(k + 1);
      if (should_stop(k + 1)) break;
    }
    rec.matvecs = solver.matvecs();
    rec.x_final = solver.x() + pre.x_bar;
  }

  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace eqsynth
