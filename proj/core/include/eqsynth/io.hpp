#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "eqsynth/analysis.hpp"
#include "eqsynth/preprocess.hpp"
#include "eqsynth/problems.hpp"
#include "eqsynth/solvers.hpp"
#include "eqsynth/synthesis.hpp"

namespace eqsynth {

/// Problem instance schema:
/// {"n", "d", "quadratic": {"Q": [[row-major]], "p": []},
///  "constraint": {"E": [[]], "q": []}, "meta": {"m", "L", "seed", "generator"}}
nlohmann::json problem_to_json(const Problem& problem);
Problem problem_from_json(const nlohmann::json& j);

Problem load_problem(const std::filesystem::path& path);
void save_problem(const std::filesystem::path& path, const Problem& problem);

/// Adds the "preprocess" object to a problem document.
nlohmann::json preprocess_to_json(const PreprocessedProblem& pre);

nlohmann::json certificate_to_json(const Certificate& cert);

/// CSV: `k,residual,residual_rel,grad_calls,matvecs`, 17 significant digits.
void write_run_csv(const std::filesystem::path& path, const RunRecord& record);

nlohmann::json run_metadata_json(const RunRecord& record, std::uint64_t seed);

/// Decimal with 17 significant digits (round-trip exact for doubles).
std::string format_sig(double v);

}  // namespace eqsynth
