#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "eqsynth/errors.hpp"

namespace eqsynth {

/// Sector parameters of the objective: m-strong convexity, L-Lipschitz
/// gradient, 0 < m <= L.
struct ConvexityProfile {
  double m;
  double L;

  double kappa_f() const { return L / m; }
  void validate() const {
    if (!(m > 0.0) || !(L >= m))
      throw ParameterError("ConvexityProfile: need 0 < m <= L");
  }
};

/// Quadratic objective f(x) = x'Qx/2 + p'x with eigenvalues of Q in [m, L].
struct QuadraticInstance {
  Eigen::MatrixXd Q;
  Eigen::VectorXd p;
  ConvexityProfile profile;

  Eigen::Index dim() const { return Q.rows(); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    if (x.size() != Q.rows())
      throw ParameterError("QuadraticInstance::gradient: dimension mismatch");
    return Q * x + p;
  }
};

using GradientOracle = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Objective: either a quadratic instance or an opaque gradient oracle with a
/// declared profile. The declared (m, L) of an oracle is trusted, not checked.
class Objective {
 public:
  explicit Objective(QuadraticInstance quad)
      : quadratic_(std::move(quad)), profile_(quadratic_->profile), n_(quadratic_->dim()) {}
  Objective(GradientOracle oracle, ConvexityProfile profile, Eigen::Index n)
      : oracle_(std::move(oracle)), profile_(profile), n_(n) {
    profile_.validate();
  }

  bool is_quadratic() const { return quadratic_.has_value(); }
  const QuadraticInstance& quadratic() const { return *quadratic_; }
  const ConvexityProfile& profile() const { return profile_; }
  Eigen::Index dim() const { return n_; }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw ParameterError("Objective::gradient: dimension mismatch");
    return quadratic_ ? quadratic_->gradient(x) : oracle_(x);
  }

 private:
  std::optional<QuadraticInstance> quadratic_;
  GradientOracle oracle_;
  ConvexityProfile profile_;
  Eigen::Index n_;
};

/// Full problem instance: objective plus linear constraint E_raw x = q.
struct Problem {
  Objective objective;
  Eigen::MatrixXd E_raw;  // d x n
  Eigen::VectorXd q;      // d

  Eigen::Index n() const { return objective.dim(); }
  Eigen::Index d() const { return E_raw.rows(); }

  // Generator provenance, kept for serialization.
  std::uint64_t seed = 0;
  std::string generator = "manual";
};

enum class SpectrumLaw { LogUniform, Uniform };

/// Seeded random quadratic with prescribed extreme eigenvalues m and L and
/// interior eigenvalues drawn by the given law.
QuadraticInstance generate_quadratic(Eigen::Index n, double m, double L,
                                     SpectrumLaw law, std::uint64_t seed);

/// Seeded random n x n symmetric PSD constraint of rank r (1 <= r <= n) with
/// prescribed extreme singular values; interior values log-uniform in
/// [sigma_min, sigma_max].
Eigen::MatrixXd generate_constraint(Eigen::Index n, Eigen::Index r, double sigma_min,
                                    double sigma_max, std::uint64_t seed);

struct KktSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd multiplier;
};

/// Ground-truth solve of min x'Qx/2 + p'x s.t. Ex = q via a rank-revealing
/// factorization of the KKT matrix. Throws InfeasibleError when the system is
/// inconsistent beyond tolerance.
KktSolution kkt_solve(const QuadraticInstance& instance, const Eigen::MatrixXd& E,
                      const Eigen::VectorXd& q);

}  // namespace eqsynth
