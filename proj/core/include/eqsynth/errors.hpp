#pragma once

#include <stdexcept>
#include <string>

namespace eqsynth {

/// Invalid argument to a generator or transform (bad dimensions, m > L, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Constraint has no solution (q outside range(E), inconsistent KKT system).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A construction-time identity that must hold by design failed numerically.
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterates left the finite range (or blew past the divergence guard).
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& msg, long iteration)
      : std::runtime_error(msg + " (iteration " + std::to_string(iteration) + ")"),
        iteration(iteration) {}
  long iteration;
};

/// Constraint spectrum falls outside the admissible interval for synthesis.
/// Carries both candidate thresholds so callers can report the boundary case.
struct RateConditionError : std::runtime_error {
  RateConditionError(const std::string& msg, double theorem_threshold,
                     double derivation_threshold)
      : std::runtime_error(msg),
        theorem_threshold(theorem_threshold),
        derivation_threshold(derivation_threshold) {}
  double theorem_threshold;
  double derivation_threshold;
};

/// Not enough usable samples for a fit.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace eqsynth
