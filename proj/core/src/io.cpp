#include "eqsynth/io.hpp"

#include <cstdio>
#include <fstream>

namespace eqsynth {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.size();
  const auto cols = rows ? j.at(0).size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j2 = 0; j2 < cols; ++j2)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j2)) =
          j.at(i).at(j2).get<double>();
  return m;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

}  // namespace

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json problem_to_json(const Problem& problem) {
  if (!problem.objective.is_quadratic())
    throw ParameterError("problem_to_json: only quadratic objectives serialize");
  const QuadraticInstance& quad = problem.objective.quadratic();
  json j;
  j["n"] = problem.n();
  j["d"] = problem.d();
  j["quadratic"] = {{"Q", matrix_to_json(quad.Q)}, {"p", vector_to_json(quad.p)}};
  j["constraint"] = {{"E", matrix_to_json(problem.E_raw)}, {"q", vector_to_json(problem.q)}};
  j["meta"] = {{"m", quad.profile.m},
               {"L", quad.profile.L},
               {"seed", problem.seed},
               {"generator", problem.generator}};
  return j;
}

Problem problem_from_json(const json& j) {
  QuadraticInstance quad;
  quad.Q = matrix_from_json(j.at("quadratic").at("Q"));
  quad.p = vector_from_json(j.at("quadratic").at("p"));
  quad.profile = {j.at("meta").at("m").get<double>(), j.at("meta").at("L").get<double>()};
  quad.profile.validate();

  Problem problem{Objective(std::move(quad)), matrix_from_json(j.at("constraint").at("E")),
                  vector_from_json(j.at("constraint").at("q"))};
  problem.seed = j.at("meta").value("seed", 0ULL);
  problem.generator = j.at("meta").value("generator", "unknown");
  if (problem.n() != j.at("n").get<Eigen::Index>() ||
      problem.d() != j.at("d").get<Eigen::Index>())
    throw ParameterError("problem_from_json: declared dimensions disagree with data");
  return problem;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("load_problem: cannot open " + path.string());
  json j;
  in >> j;
  return problem_from_json(j);
}

void save_problem(const std::filesystem::path& path, const Problem& problem) {
  std::ofstream out(path);
  if (!out) throw ParameterError("save_problem: cannot open " + path.string());
  out << problem_to_json(problem).dump(2) << '\n';
}

json preprocess_to_json(const PreprocessedProblem& pre) {
  return json{{"x_bar", vector_to_json(pre.x_bar)},
              {"scale", pre.scale},
              {"mode", to_string(pre.scaling_mode)},
              {"rank", pre.spectral.r},
              {"sigma_min", pre.spectral.sigma_min},
              {"sigma_max", pre.spectral.sigma_max}};
}

json certificate_to_json(const Certificate& cert) {
  return json{
      {"causality", cert.causality_ok},
      {"optimality", cert.optimality_ok},
      {"spr",
       {{"ok", cert.spr_ok}, {"min_re", cert.min_re}, {"max_pole", cert.max_pole_modulus}}},
      {"closed_loop",
       {{"ok", cert.closed_loop_ok},
        {"max_radius", cert.max_closed_loop_radius},
        {"rho_syn", cert.rho_syn_value}}},
      {"poles_ok", cert.poles_ok},
      {"passed", cert.passed()},
      {"rate_diagnosis", to_string(cert.rate_diagnosis)},
      {"grids",
       {{"gamma_points", cert.grids.gamma_points},
        {"sigma_points", cert.grids.sigma_points},
        {"theta_points", cert.grids.theta_points},
        {"lambda_points", cert.grids.lambda_points},
        {"closed_loop_sigma_points", cert.grids.closed_loop_sigma_points}}},
      {"params",
       {{"m", cert.params.m},
        {"L", cert.params.L},
        {"rho", cert.params.rho},
        {"eta", cert.params.eta},
        {"sigma_min", cert.params.sigma_min},
        {"sigma_max", cert.params.sigma_max}}}};
}

void write_run_csv(const std::filesystem::path& path, const RunRecord& record) {
  std::ofstream out(path);
  if (!out) throw ParameterError("write_run_csv: cannot open " + path.string());
  out << "k,residual,residual_rel,grad_calls,matvecs\n";
  const long iters = record.iterations();
  for (long k = 0; k <= iters; ++k) {
    out << k << ',' << format_sig(record.residuals[static_cast<std::size_t>(k)]) << ','
        << format_sig(record.residuals_rel[static_cast<std::size_t>(k)]) << ',' << k << ','
        << k << '\n';
  }
}

json run_metadata_json(const RunRecord& record, std::uint64_t seed) {
  json j{{"algorithm", record.algorithm},
         {"stop_reason", record.stop_reason},
         {"iterations", record.iterations()},
         {"grad_calls", record.grad_calls},
         {"matvecs", record.matvecs},
         {"wall_seconds", record.wall_seconds},
         {"seed", seed},
         {"has_x_star", record.has_x_star}};
  if (record.algorithm == "synth") {
    j["rho"] = record.rho;
    j["eta"] = record.eta;
    j["rho_syn"] = record.rho_theory;
  } else {
    j["stepsizes"] = {{"alpha1", record.alpha1}, {"alpha2", record.alpha2}};
    j["rho_gda"] = record.rho_theory;
  }
  return j;
}

}  // namespace eqsynth
