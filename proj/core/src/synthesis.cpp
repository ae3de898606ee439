#include "eqsynth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqsynth/rng.hpp"

namespace eqsynth {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_sigma(double sigma) {
  if (!(sigma >= 0.0) || !(sigma <= 1.0 + 1e-12))
    throw ParameterError("synthesis: sigma must lie in [0, 1]");
}

// 64 deterministic sample points on |z| = 1.5 for construction-time identities.
std::vector<Complex> identity_probe_points() {
  SplitMix64 rng(0x5eedf00dULL);
  std::vector<Complex> pts(64);
  for (auto& z : pts) {
    const double theta = kTwoPi * rng.uniform();
    z = Complex(1.5 * std::cos(theta), 1.5 * std::sin(theta));
  }
  return pts;
}

}  // namespace

SynthesisParams SynthesisParams::make(const ConvexityProfile& profile, double sigma_min,
                                      double sigma_max) {
  profile.validate();
  if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min))
    throw ParameterError("SynthesisParams: need 0 < sigma_min <= sigma_max");
  SynthesisParams p;
  p.m = profile.m;
  p.L = profile.L;
  p.rho = (profile.L - profile.m) / (profile.L + profile.m);
  p.eta = 2.0 / (profile.L + profile.m);
  p.sigma_min = sigma_min;
  p.sigma_max = sigma_max;
  const double rho_alt = 1.0 - 2.0 / (profile.kappa_f() + 1.0);
  if (std::abs(p.rho - rho_alt) > 1e-15 * std::max(1.0, std::abs(p.rho)))
    throw ContractError("SynthesisParams: rho identity (L-m)/(L+m) = 1 - 2/(kf+1) failed");
  return p;
}

double rho_syn(double kappa_f) {
  if (!(kappa_f >= 1.0)) throw ParameterError("rho_syn: kappa_f must be >= 1");
  return 1.0 - 2.0 / (kappa_f + 1.0);
}

double rho_gda(double kappa_f, double kappa_E) {
  if (!(kappa_f >= 1.0) || !(kappa_E >= 1.0))
    throw ParameterError("rho_gda: condition numbers must be >= 1");
  const double inner = 1.0 - (1.0 / kappa_f) * (1.0 / kappa_E - 1.0 / (kappa_E * kappa_E));
  return std::sqrt(inner);
}

GdaStepsizes gda_stepsizes(const ConvexityProfile& profile, double sigma_max,
                           double kappa_E) {
  profile.validate();
  if (!(sigma_max > 0.0) || !(kappa_E >= 1.0))
    throw ParameterError("gda_stepsizes: invalid spectrum arguments");
  return {(1.0 - 1.0 / kappa_E) / profile.L, profile.m / sigma_max};
}

RationalTF gbar(double sigma, const SynthesisParams& params) {
  require_sigma(sigma);
  const double w = 1.0 - sigma;
  const double rho = params.rho;
  // -((1-sigma) z - rho) / (rho z - (1-sigma))
  return RationalTF(Polynomial{rho, -w}, Polynomial{-w, rho});
}

RationalTF g_tf(double sigma, const SynthesisParams& params) {
  require_sigma(sigma);
  const double w = 1.0 - sigma;
  const double rho2 = params.rho * params.rho;
  const Polynomial num = -1.0 * (Polynomial{-rho2, w} * Polynomial{-1.0, 1.0});
  const Polynomial den = Polynomial{-w, 1.0} * Polynomial{-rho2, 1.0};
  return RationalTF(num, den);
}

RationalTF h_tf(double sigma, const SynthesisParams& params) {
  const RationalTF g = g_tf(sigma, params);
  const Polynomial num = g.num() * params.eta;
  const Polynomial den = Polynomial::z() * g.den() + g.num();
  RationalTF h(num, den);
  if (!h.strictly_proper())
    throw ContractError("h_tf: controller is not strictly proper");
  return h;
}

RationalTF hbar_tf(double sigma, const SynthesisParams& params) {
  const RationalTF g = g_tf(sigma, params);
  const Polynomial zdg = Polynomial::z() * g.den();
  const Polynomial rng_ = g.num() * params.rho;
  RationalTF hbar(zdg - rng_, zdg + rng_);

  // Round trip through the loop transform must reproduce h.
  const RationalTF h = h_tf(sigma, params);
  for (const Complex& z : identity_probe_points()) {
    const Complex hb = hbar.eval(z);
    const Complex h_rt = (hb - 1.0) / (params.m * hb - params.L);
    const Complex h_direct = h.eval(z);
    if (std::abs(h_rt - h_direct) > 1e-10 * (1.0 + std::abs(h_direct)))
      throw ContractError("hbar_tf: loop-transform round trip failed");
  }
  return hbar;
}

KTransfer k_transfer(const SynthesisParams& params, double sigma) {
  const RationalTF g = g_tf(sigma, params);
  KTransfer k;
  k.k0 = RationalTF::constant(1.0);
  k.k1 = g * -1.0;
  k.k2 = g * params.eta;

  // h = (z k0 - k1)^{-1} k2 must match the direct construction.
  const RationalTF z_tf(Polynomial::z(), Polynomial::constant(1.0));
  const RationalTF h_rec = (z_tf * k.k0 - k.k1).inverse() * k.k2;
  const RationalTF h = h_tf(sigma, params);
  for (const Complex& z : identity_probe_points()) {
    const Complex a = h_rec.eval(z);
    const Complex b = h.eval(z);
    if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(b)))
      throw ContractError("k_transfer: representation identity failed");
  }
  return k;
}

RationalTF gda_transfer(double alpha1, double alpha2, double sigma) {
  if (alpha1 < 0.0 || alpha2 < 0.0)
    throw ParameterError("gda_transfer: stepsizes must be nonnegative");
  const Polynomial num{alpha1, -alpha1};
  const Polynomial den{1.0 + alpha1 * alpha2 * sigma * sigma, -2.0, 1.0};
  return RationalTF(num, den);
}

CheckResult verify_causality(const RationalTF& hbar, double tol) {
  if (hbar.num().degree() != hbar.den().degree())
    return {false, std::numeric_limits<double>::infinity()};
  const double ratio = hbar.num().leading() / hbar.den().leading();
  const double margin = std::abs(ratio - 1.0);
  return {margin <= tol, margin};
}

CheckResult verify_optimality(const RationalTF& hbar, double sigma,
                              const SynthesisParams& params, double tol) {
  const double target = (sigma == 0.0) ? params.L / params.m : 1.0;
  const double den1 = std::abs(hbar.den().eval(1.0));
  if (den1 < 1e-12) {
    // Pole at z = 1 survived cancellation; report failure, never evaluate 0/0.
    return {false, std::numeric_limits<double>::infinity()};
  }
  const double value = hbar.num().eval(1.0) / hbar.den().eval(1.0);
  return {std::abs(value - target) <= tol * std::max(1.0, std::abs(target)), value};
}

SprResult verify_spr(const RationalTF& hbar, const std::vector<double>& gamma_grid,
                     int theta_points, double tol) {
  if (gamma_grid.empty() || theta_points < 1)
    throw ParameterError("verify_spr: empty grid");

  double max_pole = 0.0;
  for (const Complex& p : hbar.poles()) max_pole = std::max(max_pole, std::abs(p));
  const double gamma_min = *std::min_element(gamma_grid.begin(), gamma_grid.end());
  const bool poles_ok = max_pole <= gamma_min + tol;

  double min_re = std::numeric_limits<double>::infinity();
  for (double gamma : gamma_grid) {
    for (int t = 0; t < theta_points; ++t) {
      const double theta = kTwoPi * static_cast<double>(t) / theta_points;
      const Complex z(gamma * std::cos(theta), gamma * std::sin(theta));
      min_re = std::min(min_re, hbar.eval(z).real());
    }
  }
  return {poles_ok && min_re >= -tol, min_re, max_pole};
}

double closed_loop_radius(double lambda, double sigma, const SynthesisParams& params) {
  if (!(lambda >= params.m - 1e-12) || !(lambda <= params.L + 1e-12))
    throw ParameterError("closed_loop_radius: lambda outside [m, L]");
  const RationalTF h = h_tf(sigma, params);
  const Polynomial closed = h.den() - lambda * h.num();
  double radius = 0.0;
  for (const Complex& r : closed.roots()) radius = std::max(radius, std::abs(r));
  return radius;
}

std::vector<double> default_gamma_grid(double rho, int points) {
  if (points < 1) throw ParameterError("default_gamma_grid: need at least one point");
  const double lo = std::max(rho * (1.0 + 1e-6), 1e-3);
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) {
    grid[0] = 1.0;
    return grid;
  }
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    grid[static_cast<std::size_t>(i)] = std::exp(std::log(lo) * (1.0 - t));
  }
  grid.back() = 1.0;
  return grid;
}

std::vector<double> default_sigma_grid(double sigma_min, double sigma_max, int points) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points) + 2);
  const int interior = std::max(points - 2, 1);
  for (int i = 0; i < interior; ++i) {
    const double t = interior == 1 ? 0.0 : static_cast<double>(i) / (interior - 1);
    grid.push_back(std::exp(std::log(sigma_min) +
                            t * (std::log(sigma_max) - std::log(sigma_min))));
  }
  grid.push_back(0.0);
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-15; }),
             grid.end());
  return grid;
}

Certificate certify(const SynthesisParams& params, const CertifyGrids& grids) {
  const ConvexityProfile profile{params.m, params.L};
  const RateCondition rc =
      check_rate_condition(params.sigma_min, params.sigma_max, profile);
  if (rc.diagnosis == RateDiagnosis::Violated)
    throw RateConditionError(
        "certify: sigma_min below both admissible thresholds (theorem 2/kappa_f = " +
            std::to_string(rc.theorem_threshold) + ", derivation 2/(kappa_f+1) = " +
            std::to_string(rc.derivation_threshold) + ")",
        rc.theorem_threshold, rc.derivation_threshold);

  Certificate cert;
  cert.grids = grids;
  cert.params = params;
  cert.rate_diagnosis = rc.diagnosis;
  cert.rho_syn_value = rho_syn(params.kappa_f());

  const std::vector<double> sigma_grid =
      default_sigma_grid(params.sigma_min, params.sigma_max, grids.sigma_points);
  const std::vector<double> gamma_grid = default_gamma_grid(params.rho, grids.gamma_points);

  cert.causality_ok = true;
  cert.optimality_ok = true;
  cert.spr_ok = true;
  cert.worst_causality_margin = 0.0;
  cert.worst_optimality_error = 0.0;
  cert.min_re = std::numeric_limits<double>::infinity();
  cert.max_pole_modulus = 0.0;

  for (double sigma : sigma_grid) {
    const RationalTF hbar = hbar_tf(sigma, params);

    const CheckResult causal = verify_causality(hbar);
    cert.causality_ok = cert.causality_ok && causal.ok;
    cert.worst_causality_margin = std::max(cert.worst_causality_margin, causal.value);

    const CheckResult opt = verify_optimality(hbar, sigma, params);
    const double target = (sigma == 0.0) ? params.L / params.m : 1.0;
    cert.optimality_ok = cert.optimality_ok && opt.ok;
    cert.worst_optimality_error = std::max(
        cert.worst_optimality_error,
        std::abs(opt.value - target) / std::max(1.0, std::abs(target)));

    const SprResult spr = verify_spr(hbar, gamma_grid, grids.theta_points);
    cert.spr_ok = cert.spr_ok && spr.ok;
    cert.min_re = std::min(cert.min_re, spr.min_re);
    cert.max_pole_modulus = std::max(cert.max_pole_modulus, spr.max_pole_modulus);
  }
  cert.poles_ok = cert.max_pole_modulus <= cert.rho_syn_value + 1e-9;

  // Closed-loop sweep over the corner set and a log-spaced interior grid.
  std::vector<double> lambdas{params.m, params.L};
  for (int i = 0; i < grids.lambda_points; ++i) {
    const double t = (grids.lambda_points == 1)
                         ? 0.5
                         : static_cast<double>(i) / (grids.lambda_points - 1);
    lambdas.push_back(
        std::exp(std::log(params.m) + t * (std::log(params.L) - std::log(params.m))));
  }
  std::vector<double> sigmas{0.0, params.sigma_min, params.sigma_max, 1.0};
  for (int i = 0; i < grids.closed_loop_sigma_points; ++i) {
    const double t = (grids.closed_loop_sigma_points == 1)
                         ? 0.5
                         : static_cast<double>(i) / (grids.closed_loop_sigma_points - 1);
    sigmas.push_back(std::exp(std::log(params.sigma_min) +
                              t * (std::log(params.sigma_max) - std::log(params.sigma_min))));
  }
  cert.max_closed_loop_radius = 0.0;
  for (double lambda : lambdas)
    for (double sigma : sigmas)
      cert.max_closed_loop_radius =
          std::max(cert.max_closed_loop_radius, closed_loop_radius(lambda, sigma, params));
  cert.closed_loop_ok = cert.max_closed_loop_radius <= cert.rho_syn_value + 1e-9;

  return cert;
}

}  // namespace eqsynth
