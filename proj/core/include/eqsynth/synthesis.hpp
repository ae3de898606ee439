#pragma once

#include <vector>

#include "eqsynth/preprocess.hpp"
#include "eqsynth/problems.hpp"
#include "eqsynth/rational.hpp"

namespace eqsynth {

/// Parameters the synthesized transfer-function family depends on. rho is the
/// contraction factor (L-m)/(L+m) and eta the gradient stepsize 2/(L+m); the
/// constructor asserts the algebraic identity rho = 1 - 2/(kappa_f + 1).
struct SynthesisParams {
  double m = 1.0;
  double L = 1.0;
  double rho = 0.0;
  double eta = 1.0;
  double sigma_min = 1.0;
  double sigma_max = 1.0;

  double kappa_f() const { return L / m; }

  static SynthesisParams make(const ConvexityProfile& profile, double sigma_min,
                              double sigma_max);
};

/// Best guaranteed rate of the synthesized algorithm: 1 - 2/(kappa_f + 1).
double rho_syn(double kappa_f);

/// Best known GDA rate with the stepsizes tuned for it. Returns 1 when
/// kappa_E = 1 (the tuned alpha_1 degenerates to zero).
double rho_gda(double kappa_f, double kappa_E);

struct GdaStepsizes {
  double alpha1;
  double alpha2;
};

/// Stepsizes attaining rho_gda: alpha1 = (1 - 1/kappa_E)/L, alpha2 = m/sigma_max.
GdaStepsizes gda_stepsizes(const ConvexityProfile& profile, double sigma_max,
                           double kappa_E);

/// All-pass interpolant: gbar(z, sigma) = -((1-sigma) z - rho)/(rho z - (1-sigma)).
RationalTF gbar(double sigma, const SynthesisParams& params);

/// g(z, sigma) = rho * gbar(z/rho, sigma) * (z-1)/(z - rho^2), in cancelled
/// closed form. Collapses to the constant -1 at sigma = 0.
RationalTF g_tf(double sigma, const SynthesisParams& params);

/// Controller per constraint mode: h = eta * g / (z + g). Strictly proper.
RationalTF h_tf(double sigma, const SynthesisParams& params);

/// Loop-transformed function hbar = (z - rho g)/(z + rho g). The constructor
/// checks the round trip h = (hbar - 1)/(m hbar - L) at random points.
RationalTF hbar_tf(double sigma, const SynthesisParams& params);

struct KTransfer {
  RationalTF k0, k1, k2;
};

/// Scalar algorithm representation z k0 x = k1 x + k2 grad with k0 = 1,
/// k1 = -g, k2 = eta g; verified to reconstruct h.
KTransfer k_transfer(const SynthesisParams& params, double sigma);

/// GDA in the same representation: h_gda = alpha1 (1-z) / (z^2 - 2z + 1 +
/// alpha1 alpha2 sigma^2).
RationalTF gda_transfer(double alpha1, double alpha2, double sigma);

struct CheckResult {
  bool ok;
  double value;  // margin or evaluated value, check dependent
};

/// Causality: hbar biproper with leading-coefficient ratio one. value is the
/// ratio's deviation from one.
CheckResult verify_causality(const RationalTF& hbar, double tol = 1e-10);

/// Interpolation value at z = 1: one for sigma > 0, L/m for sigma = 0.
/// Evaluation is post-cancellation; an uncancelled pole at 1 reports failure.
CheckResult verify_optimality(const RationalTF& hbar, double sigma,
                              const SynthesisParams& params, double tol = 1e-9);

struct SprResult {
  bool ok;
  double min_re;            // min real part over the (gamma, theta) grid
  double max_pole_modulus;  // over poles of hbar
};

/// Circle-criterion check: hbar(gamma z) stable and with nonnegative real part
/// on the boundary grid. Boundary evaluation suffices since the real part is
/// harmonic outside the disk and hbar(inf) = 1.
SprResult verify_spr(const RationalTF& hbar, const std::vector<double>& gamma_grid,
                     int theta_points, double tol = 1e-9);

/// Spectral radius of the loop closed with the static gain lambda: max root
/// modulus of D(z) - lambda N(z) for h = N/D.
double closed_loop_radius(double lambda, double sigma, const SynthesisParams& params);

struct CertifyGrids {
  int gamma_points = 33;
  int sigma_points = 65;
  int theta_points = 1024;
  int lambda_points = 16;
  int closed_loop_sigma_points = 16;
};

struct Certificate {
  bool causality_ok = false;
  bool optimality_ok = false;
  bool spr_ok = false;
  bool poles_ok = false;
  bool closed_loop_ok = false;

  double worst_causality_margin = 0.0;
  double worst_optimality_error = 0.0;
  double min_re = 0.0;
  double max_pole_modulus = 0.0;
  double max_closed_loop_radius = 0.0;
  double rho_syn_value = 0.0;

  CertifyGrids grids;
  SynthesisParams params;
  RateDiagnosis rate_diagnosis = RateDiagnosis::Violated;

  bool passed() const {
    return causality_ok && optimality_ok && spr_ok && poles_ok && closed_loop_ok;
  }
};

/// Runs every design-condition verifier over the sigma/gamma/lambda grids.
/// Throws RateConditionError when the spectrum violates both admissible
/// intervals (unless the check was bypassed upstream).
Certificate certify(const SynthesisParams& params, const CertifyGrids& grids = {});

/// Default gamma grid: geometric in (rho, 1], starting just above rho.
std::vector<double> default_gamma_grid(double rho, int points);

/// Default sigma grid: log-spaced in [sigma_min, sigma_max] plus {0, 1}.
std::vector<double> default_sigma_grid(double sigma_min, double sigma_max, int points);

}  // namespace eqsynth
