#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "eqsynth/errors.hpp"
#include "eqsynth/preprocess.hpp"
#include "eqsynth/problems.hpp"
#include "eqsynth/rng.hpp"

using namespace eqsynth;

TEST_CASE("symmetrize forms the normal system for a rectangular constraint") {
  Eigen::MatrixXd e(1, 2);
  e << 1.0, 1.0;
  auto [es, qs] = symmetrize(e, Eigen::VectorXd::Zero(1));
  Eigen::MatrixXd expect(2, 2);
  expect << 1.0, 1.0, 1.0, 1.0;
  CHECK((es - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(qs.norm() == 0.0);
}

TEST_CASE("symmetrize is the identity on symmetric PSD input") {
  Eigen::MatrixXd e(3, 3);
  e << 2.0, 0.5, 0.0, 0.5, 1.0, 0.0, 0.0, 0.0, 0.0;
  Eigen::VectorXd q(3);
  q << 1.0, 2.0, 0.0;
  auto [es, qs] = symmetrize(e, q);
  CHECK((es - e).cwiseAbs().maxCoeff() == 0.0);
  CHECK((qs - q).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symmetrize preserves the null space of a rectangular constraint") {
  SplitMix64 rng(31);
  Eigen::MatrixXd e = rng.normal_matrix(4, 6);
  auto [es, qs] = symmetrize(e, Eigen::VectorXd::Zero(4));
  // null(E'E) = null(E): every null vector of E'E must be annihilated by E.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(es, Eigen::ComputeFullV);
  int null_dim = 0;
  for (Eigen::Index i = 0; i < 6; ++i) {
    if (svd.singularValues()(i) < 1e-10 * svd.singularValues()(0)) {
      ++null_dim;
      CHECK((e * svd.matrixV().col(i)).norm() < 1e-8);
    }
  }
  CHECK(null_dim == 2);
}

TEST_CASE("homogenize: zero right-hand side, pseudoinverse shift, infeasibility") {
  Eigen::MatrixXd e = Eigen::Vector2d(2.0, 0.0).asDiagonal();

  CHECK(homogenize(e, Eigen::VectorXd::Zero(2)).norm() == 0.0);

  Eigen::VectorXd q(2);
  q << 4.0, 0.0;
  Eigen::VectorXd xb = homogenize(e, q);
  CHECK(xb(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(xb(1) == doctest::Approx(0.0));

  Eigen::VectorXd bad(2);
  bad << 0.0, 1.0;
  CHECK_THROWS_AS(homogenize(e, bad), InfeasibleError);
}

TEST_CASE("scale modes bring the top singular value at or below one") {
  Eigen::MatrixXd e = Eigen::Vector2d(4.0, 1.0).asDiagonal();

  auto [et, ct] = scale_constraint(e, ScaleMode::Trace);
  CHECK(ct == doctest::Approx(5.0));
  CHECK(spectral_analysis(et).sigma_max == doctest::Approx(0.8).epsilon(1e-12));

  auto [esig, csig] = scale_constraint(e, ScaleMode::SigmaMax);
  CHECK(csig == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(spectral_analysis(esig).sigma_max == doctest::Approx(1.0).epsilon(1e-12));

  auto [ecol, ccol] = scale_constraint(e, ScaleMode::ColSum);
  CHECK(ccol == doctest::Approx(4.0));
  CHECK(spectral_analysis(ecol).sigma_max <= 1.0 + 1e-12);

  // Uniform scaling never changes the effective condition number.
  auto e2 = generate_constraint(12, 7, 0.05, 1.0, 9);
  const double k_before = spectral_analysis(e2).kappa_E;
  for (ScaleMode mode : {ScaleMode::Trace, ScaleMode::ColSum, ScaleMode::SigmaMax}) {
    auto [scaled, c] = scale_constraint(e2, mode);
    CHECK(spectral_analysis(scaled).kappa_E ==
          doctest::Approx(k_before).epsilon(1e-12));
    CHECK(c > 0.0);
  }
  CHECK_THROWS_AS(scale_constraint(Eigen::MatrixXd::Zero(2, 2), ScaleMode::Trace),
                  ParameterError);
}

TEST_CASE("spectral analysis on a diagonal constraint") {
  Eigen::MatrixXd e = Eigen::Vector3d(1.0, 0.5, 0.0).asDiagonal();
  auto sd = spectral_analysis(e);
  CHECK(sd.r == 2);
  CHECK(sd.sigma(0) == doctest::Approx(1.0));
  CHECK(sd.sigma(1) == doctest::Approx(0.5));
  CHECK(sd.kappa_E == doctest::Approx(2.0));
  CHECK(std::abs(sd.V2.col(0)(2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral analysis invariants on generated constraints") {
  auto e = generate_constraint(100, 80, 0.01, 1.0, 55);
  auto sd = spectral_analysis(e);
  CHECK(sd.r == 80);
  CHECK(sd.kappa_E == doctest::Approx(100.0).epsilon(1e-9));

  Eigen::MatrixXd v(100, 100);
  v << sd.V1, sd.V2;
  CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(100, 100)).cwiseAbs().maxCoeff() <=
        1e-10);
  CHECK((e - sd.V1 * sd.sigma.asDiagonal() * sd.V1.transpose()).norm() <=
        1e-9 * (1.0 + e.norm()));
  CHECK((e * sd.V2).norm() <= 1e-9);

  Eigen::MatrixXd asym(2, 2);
  asym << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(spectral_analysis(asym), ContractError);
}

TEST_CASE("rate-condition diagnosis around both thresholds") {
  ConvexityProfile profile{1.0, 2000.0};

  auto ok = check_rate_condition(0.1, 1.0, profile);
  CHECK(ok.diagnosis == RateDiagnosis::OkTheorem);
  CHECK(ok.theorem_threshold == doctest::Approx(0.001));
  CHECK(ok.derivation_threshold == doctest::Approx(2.0 / 2001.0));

  // sigma_min exactly at 2/kappa_f: outside the open theorem interval but
  // inside the wider derivation one.
  auto boundary = check_rate_condition(0.001, 1.0, profile);
  CHECK(boundary.diagnosis == RateDiagnosis::OkDerivationOnly);

  CHECK(check_rate_condition(0.0005, 1.0, profile).diagnosis ==
        RateDiagnosis::Violated);
  // sigma_max beyond one fails regardless of sigma_min.
  CHECK(check_rate_condition(0.5, 1.5, profile).diagnosis == RateDiagnosis::Violated);
}

TEST_CASE("pipeline is idempotent on already-normalized constraints") {
  auto e = generate_constraint(10, 6, 0.2, 1.0, 77);
  auto pre1 = preprocess(e, Eigen::VectorXd::Zero(10));
  CHECK(!pre1.was_symmetrized);
  CHECK(!pre1.was_homogenized);
  auto pre2 = preprocess(pre1.E_norm, Eigen::VectorXd::Zero(10));
  CHECK((pre2.E_norm - pre1.E_norm).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(pre2.x_bar.norm() == 0.0);
  CHECK(pre2.scale == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pipeline flags and shift on a rectangular inhomogeneous constraint") {
  SplitMix64 rng(41);
  Eigen::MatrixXd e = rng.normal_matrix(3, 5);
  Eigen::VectorXd x_feas = rng.normal_vector(5);
  Eigen::VectorXd q = e * x_feas;
  auto pre = preprocess(e, q);
  CHECK(pre.was_symmetrized);
  CHECK(pre.was_homogenized);
  CHECK((e * pre.x_bar - q).norm() <= 1e-8 * (1.0 + q.norm()));
  CHECK(pre.spectral.sigma_max <= 1.0 + 1e-12);
}

TEST_CASE("preprocessed solves map back to the original constraint") {
  // Solve on the normalized homogeneous data, un-shift, and compare with the
  // ground truth on the original data.
  SplitMix64 rng(900);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index n = 4 + (trial % 3);
    auto quad = generate_quadratic(n, 1.0, 20.0, SpectrumLaw::Uniform,
                                   1000 + static_cast<std::uint64_t>(trial));
    Eigen::MatrixXd e_raw = rng.normal_matrix(n - 2, n);
    Eigen::VectorXd q = e_raw * rng.normal_vector(n);
    auto pre = preprocess(e_raw, q);

    auto original = kkt_solve(quad, e_raw, q);

    // Shifted objective on the homogeneous constraint: grad at (x + x_bar).
    QuadraticInstance shifted = quad;
    shifted.p = quad.p + quad.Q * pre.x_bar;
    auto normalized =
        kkt_solve(shifted, pre.E_norm, Eigen::VectorXd::Zero(pre.E_norm.rows()));
    Eigen::VectorXd mapped = normalized.x + pre.x_bar;

    CHECK((e_raw * mapped - q).norm() <= 1e-8 * (1.0 + q.norm()));
    CHECK((mapped - original.x).norm() <= 1e-7 * (1.0 + original.x.norm()));
  }
}

TEST_CASE("string conversions") {
  CHECK(to_string(ScaleMode::Trace) == "trace");
  CHECK(to_string(ScaleMode::SigmaMax) == "sigma_max");
  CHECK(to_string(RateDiagnosis::OkTheorem) == "ok_theorem");
  CHECK(to_string(RateDiagnosis::OkDerivationOnly) == "ok_derivation_only");
  CHECK(to_string(RateDiagnosis::Violated) == "violated");
}
