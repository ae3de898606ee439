#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "eqsynth/errors.hpp"
#include "eqsynth/preprocess.hpp"
#include "eqsynth/problems.hpp"
#include "eqsynth/rng.hpp"

using namespace eqsynth;

TEST_CASE("quadratic generator pins the extreme eigenvalues") {
  auto inst = generate_quadratic(100, 1.0, 2000.0, SpectrumLaw::LogUniform, 42);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inst.Q);
  CHECK(es.eigenvalues().minCoeff() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(2000.0).epsilon(1e-9));
  CHECK((inst.Q - inst.Q.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(inst.profile.kappa_f() == doctest::Approx(2000.0));
}

TEST_CASE("m = L collapses the quadratic to a scaled identity") {
  auto inst = generate_quadratic(2, 1.0, 1.0, SpectrumLaw::Uniform, 3);
  CHECK((inst.Q - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("uniform law keeps the interior spectrum inside [m, L]") {
  auto inst = generate_quadratic(5, 0.5, 8.0, SpectrumLaw::Uniform, 7);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inst.Q);
  CHECK(es.eigenvalues().minCoeff() >= 0.5 - 1e-9);
  CHECK(es.eigenvalues().maxCoeff() <= 8.0 + 1e-9);
}

TEST_CASE("generators are deterministic in the seed") {
  auto a = generate_quadratic(20, 1.0, 10.0, SpectrumLaw::LogUniform, 99);
  auto b = generate_quadratic(20, 1.0, 10.0, SpectrumLaw::LogUniform, 99);
  CHECK((a.Q - b.Q).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.p - b.p).cwiseAbs().maxCoeff() == 0.0);
  auto c = generate_quadratic(20, 1.0, 10.0, SpectrumLaw::LogUniform, 100);
  CHECK((a.Q - c.Q).cwiseAbs().maxCoeff() > 0.0);

  auto e1 = generate_constraint(10, 6, 0.1, 1.0, 5);
  auto e2 = generate_constraint(10, 6, 0.1, 1.0, 5);
  CHECK((e1 - e2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constraint generator: rank and extreme singular values") {
  auto e = generate_constraint(100, 80, 0.1, 1.0, 17);
  auto sd = spectral_analysis(e);
  CHECK(sd.r == 80);
  CHECK(sd.sigma_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sd.sigma_min == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(sd.kappa_E == doctest::Approx(10.0).epsilon(1e-9));

  auto e3 = generate_constraint(100, 80, 0.001, 1.0, 18);
  CHECK(spectral_analysis(e3).kappa_E == doctest::Approx(1000.0).epsilon(1e-9));
}

TEST_CASE("full-rank equal-spectrum constraint is the identity") {
  auto e = generate_constraint(3, 3, 1.0, 1.0, 1);
  CHECK((e - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("constraint generator rejects bad arguments") {
  CHECK_THROWS_AS(generate_constraint(5, 6, 0.1, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(generate_constraint(5, 0, 0.1, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(generate_constraint(5, 2, -0.1, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(generate_quadratic(1, 1.0, 2.0, SpectrumLaw::Uniform, 1), ParameterError);
  CHECK_THROWS_AS(generate_quadratic(5, 2.0, 1.0, SpectrumLaw::Uniform, 1), ParameterError);
}

TEST_CASE("kkt oracle: unconstrained optimum already feasible") {
  QuadraticInstance inst{Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3),
                         {1.0, 1.0}};
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(1, 3);
  e(0, 0) = 1.0;
  auto sol = kkt_solve(inst, e, Eigen::VectorXd::Zero(1));
  CHECK(sol.x.norm() < 1e-12);
}

TEST_CASE("kkt oracle matches the hand-solved 3x3 system") {
  // min x1^2/2 + x2^2 - x1 - 2 x2  s.t.  x1 + x2 = 0
  QuadraticInstance inst;
  inst.Q = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  inst.p = Eigen::Vector2d(-1.0, -2.0);
  inst.profile = {1.0, 2.0};
  Eigen::MatrixXd e(1, 2);
  e << 1.0, 1.0;
  auto sol = kkt_solve(inst, e, Eigen::VectorXd::Zero(1));
  CHECK(sol.x(0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(sol.x(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // Stationarity: the gradient is orthogonal to the feasible direction (1,-1).
  Eigen::Vector2d grad = inst.gradient(sol.x);
  CHECK(grad(0) == doctest::Approx(grad(1)).epsilon(1e-12));
}

TEST_CASE("kkt oracle at experiment scale satisfies its tolerances") {
  auto inst = generate_quadratic(100, 1.0, 2000.0, SpectrumLaw::LogUniform, 42);
  auto e = generate_constraint(100, 80, 0.001, 1.0, 103);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(100);
  auto sol = kkt_solve(inst, e, q);
  CHECK((e * sol.x - q).norm() <= 1e-9 * (1.0 + q.norm()));
  // Optimality split against the spectral bases: the solution lives in
  // null(E), the gradient in range(E).
  auto sd = spectral_analysis(e);
  Eigen::VectorXd grad = inst.gradient(sol.x);
  CHECK((sd.V2.transpose() * grad).norm() <= 1e-8 * (1.0 + grad.norm()));
  CHECK((sd.V1.transpose() * sol.x).norm() <= 1e-8 * (1.0 + sol.x.norm()));
}

TEST_CASE("kkt oracle flags an infeasible constraint") {
  QuadraticInstance inst{Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2),
                         {1.0, 1.0}};
  Eigen::MatrixXd e(2, 2);
  e << 1.0, 0.0, 1.0, 0.0;  // rank one
  Eigen::VectorXd q(2);
  q << 1.0, 2.0;  // not in range(E)
  CHECK_THROWS_AS(kkt_solve(inst, e, q), InfeasibleError);
}

TEST_CASE("gradient evaluation") {
  QuadraticInstance ident{Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2),
                          {1.0, 1.0}};
  Eigen::Vector2d x(3.0, 4.0);
  CHECK((ident.gradient(x) - x).norm() == 0.0);

  QuadraticInstance diag;
  diag.Q = Eigen::Vector2d(1.0, 2000.0).asDiagonal();
  diag.p = Eigen::VectorXd::Zero(2);
  diag.profile = {1.0, 2000.0};
  Eigen::Vector2d g = diag.gradient(Eigen::Vector2d(1.0, 1.0));
  CHECK(g(0) == doctest::Approx(1.0));
  CHECK(g(1) == doctest::Approx(2000.0));

  CHECK_THROWS_AS(ident.gradient(Eigen::VectorXd::Zero(3)), ParameterError);
}

TEST_CASE("gradient matches central finite differences of the objective") {
  auto inst = generate_quadratic(8, 1.0, 50.0, SpectrumLaw::Uniform, 11);
  SplitMix64 rng(123);
  Eigen::VectorXd x = rng.normal_vector(8);
  auto f = [&](const Eigen::VectorXd& v) {
    return 0.5 * v.dot(inst.Q * v) + inst.p.dot(v);
  };
  const double h = 1e-6 * (1.0 + x.norm());
  Eigen::VectorXd grad = inst.gradient(x);
  for (int i = 0; i < 8; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    const double fd = (f(xp) - f(xm)) / (2.0 * h);
    CHECK(std::abs(fd - grad(i)) <= 1e-6 * (1.0 + std::abs(grad(i))));
  }
}

TEST_CASE("quadratic gradients satisfy the sector bounds on sampled pairs") {
  auto inst = generate_quadratic(12, 0.7, 90.0, SpectrumLaw::LogUniform, 202);
  SplitMix64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd x = rng.normal_vector(12);
    Eigen::VectorXd xp = rng.normal_vector(12);
    Eigen::VectorXd d = x - xp;
    const double inner = (inst.gradient(x) - inst.gradient(xp)).dot(d);
    const double nn = d.squaredNorm();
    CHECK(inner >= 0.7 * nn * (1.0 - 1e-9));
    CHECK(inner <= 90.0 * nn * (1.0 + 1e-9));
  }
}

TEST_CASE("oracle objectives pass the gradient through and trust the profile") {
  Eigen::Index n = 3;
  Objective obj([](const Eigen::VectorXd& x) { return Eigen::VectorXd(2.0 * x); },
                ConvexityProfile{2.0, 2.0}, n);
  CHECK(!obj.is_quadratic());
  CHECK(obj.profile().L == 2.0);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  CHECK((obj.gradient(x) - 2.0 * x).norm() == 0.0);
}
