// Command-line front end: generation, certification, solving, and comparison
// experiments built on the core library. Exit codes: 0 success, 1 usage error,
// 2 infeasible / rate-condition violation, 3 divergence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eqsynth/analysis.hpp"
#include "eqsynth/io.hpp"
#include "eqsynth/preprocess.hpp"
#include "eqsynth/problems.hpp"
#include "eqsynth/solvers.hpp"
#include "eqsynth/synthesis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eqsynth;

namespace {

fs::path default_out_dir() {
  if (const char* env = std::getenv("EQSYNTH_OUT_DIR")) return fs::path(env);
  return fs::current_path();
}

Algorithm parse_algo(const std::string& name) {
  if (name == "synth") return Algorithm::Synthesized;
  if (name == "gda") return Algorithm::Gda;
  if (name == "gda-inc") return Algorithm::GdaIncremental;
  throw ParameterError("unknown algorithm '" + name + "' (expected synth|gda|gda-inc)");
}

SpectrumLaw parse_law(const std::string& name) {
  if (name == "loguniform") return SpectrumLaw::LogUniform;
  if (name == "uniform") return SpectrumLaw::Uniform;
  throw ParameterError("unknown spectrum law '" + name + "'");
}

// Fit policy per algorithm family: the synthesized runs hit the double
// precision floor, so the fit window stays above 1e-9 relative; slow GDA runs
// may never enter the auto window, in which case the asymptotic second half of
// the run is used.
RateFit fit_with_fallback(const RunRecord& rec, FitPolicy* used) {
  FitPolicy policy;
  if (rec.algorithm == "synth") policy.lower_rel = 1e-9;
  try {
    if (used) *used = policy;
    return fit_rate(rec, policy);
  } catch (const InsufficientDataError&) {
    const long n = rec.iterations();
    FitPolicy fallback = FitPolicy::window(n / 2, n);
    if (used) *used = fallback;
    return fit_rate(rec, fallback);
  }
}

FitPolicy fit_policy_with_fallback(const RunRecord& rec) {
  FitPolicy policy;
  fit_with_fallback(rec, &policy);
  return policy;
}

struct GenerateArgs {
  long n = 100, d = -1, rank = 80;
  double m = 1.0, L = 2000.0, sigma_min = 0.1, sigma_max = 1.0;
  std::string law = "loguniform";
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  if (a.d >= 0 && a.d != a.n)
    throw ParameterError("generate: the constraint generator is square, --d must equal --n");
  auto quad = generate_quadratic(a.n, a.m, a.L, parse_law(a.law), a.seed);
  auto e = generate_constraint(a.n, a.rank, a.sigma_min, a.sigma_max, a.seed + 1);
  Problem problem{Objective(std::move(quad)), std::move(e), Eigen::VectorXd::Zero(a.n)};
  problem.seed = a.seed;
  problem.generator = "quadratic+psd";

  auto pre = preprocess(problem.E_raw, problem.q);
  auto cond = check_rate_condition(pre.spectral, problem.objective.profile());

  fs::path out = a.out.empty() ? default_out_dir() / "problem.json" : fs::path(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_problem(out, problem);

  std::cout << "wrote " << out.string() << "\n"
            << "kappa_f = " << format_sig(problem.objective.profile().kappa_f()) << "\n"
            << "kappa_E = " << format_sig(pre.spectral.kappa_E) << "\n"
            << "rank = " << pre.spectral.r << "\n"
            << "sigma_min = " << format_sig(pre.spectral.sigma_min) << "\n"
            << "threshold 2/kappa_f = " << format_sig(cond.theorem_threshold) << "\n"
            << "threshold 2/(kappa_f+1) = " << format_sig(cond.derivation_threshold)
            << "\n"
            << "rate condition: " << to_string(cond.diagnosis) << "\n";
  return 0;
}

struct CertifyArgs {
  std::string problem;
  double m = 1.0, L = 1.0, sigma_min = 1.0, sigma_max = 1.0;
  bool explicit_params = false;
  CertifyGrids grids;
  std::string out;
};

int cmd_certify(const CertifyArgs& a) {
  SynthesisParams params;
  if (!a.problem.empty()) {
    Problem p = load_problem(a.problem);
    auto pre = preprocess(p.E_raw, p.q);
    params = SynthesisParams::make(p.objective.profile(), pre.spectral.sigma_min,
                                   pre.spectral.sigma_max);
  } else if (a.explicit_params) {
    params = SynthesisParams::make(ConvexityProfile{a.m, a.L}, a.sigma_min, a.sigma_max);
  } else {
    throw ParameterError("certify: need --problem or explicit --m/--L/--sigma-min/--sigma-max");
  }

  auto cert = certify(params, a.grids);
  auto j = certificate_to_json(cert);
  if (!a.out.empty()) {
    fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream(out) << j.dump(2) << "\n";
    std::cout << "wrote " << out.string() << "\n";
  }
  std::cout << j.dump(2) << "\n";
  std::cout << (cert.passed() ? "certificate PASSED" : "certificate FAILED") << "\n";
  return cert.passed() ? 0 : 2;
}

struct SolveArgs {
  std::string problem;
  std::string algo = "synth";
  long max_iter = 1000;
  double tol = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  bool eta_one_minus_rho = false;
  bool force = false;
  std::string x0 = "zero";
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  if (a.x0 != "zero") throw ParameterError("solve: only --x0 zero is supported");
  Problem p = load_problem(a.problem);
  auto pre = preprocess(p.E_raw, p.q);

  RunOptions opts;
  opts.algorithm = parse_algo(a.algo);
  opts.max_iter = a.max_iter;
  opts.eta_one_minus_rho = a.eta_one_minus_rho;
  opts.force = a.force;
  if (a.alpha1 > 0.0) opts.alpha1 = a.alpha1;
  if (a.alpha2 > 0.0) opts.alpha2 = a.alpha2;

  StopRule stop = a.tol > 0.0 ? StopRule::residual_below(a.tol) : StopRule::max_iter();
  auto rec = run(p, pre, opts, stop);

  fs::path dir = a.out.empty() ? default_out_dir() : fs::path(a.out);
  fs::create_directories(dir);
  const std::string stem = "run_" + a.algo;
  write_run_csv(dir / (stem + ".csv"), rec);
  std::ofstream(dir / (stem + ".json")) << run_metadata_json(rec, p.seed).dump(2) << "\n";

  std::cout << "wrote " << (dir / (stem + ".csv")).string() << "\n"
            << "iterations = " << rec.iterations() << ", stop: " << rec.stop_reason
            << "\n"
            << "final relative residual = " << format_sig(rec.residuals_rel.back())
            << "\n";
  return 0;
}

struct CompareArgs {
  std::vector<std::string> problems;
  std::vector<std::string> algos;
  long max_iter = 1000;
  bool force = false;
  bool eta_one_minus_rho = false;
  std::string out;
};

int cmd_compare(const CompareArgs& a) {
  if (a.problems.empty() || a.algos.empty())
    throw ParameterError("compare: need at least one --problem and one --algo");

  fs::path dir = a.out.empty() ? default_out_dir() / "compare" : fs::path(a.out);
  fs::create_directories(dir);

  json config;
  config["max_iter"] = a.max_iter;
  config["force"] = a.force;
  config["eta_one_minus_rho"] = a.eta_one_minus_rho;
  config["problems"] = a.problems;
  config["algorithms"] = a.algos;

  struct Entry {
    std::string label;
    RunRecord record;
    double rho_gda_value = 0.0;
    std::string instance;
  };
  std::vector<Entry> entries;
  double rho_syn_value = 0.0;
  std::map<std::string, double> rho_gda_by_instance;

  for (const std::string& path : a.problems) {
    Problem p = load_problem(path);
    auto pre = preprocess(p.E_raw, p.q);
    const std::string instance = fs::path(path).stem().string();
    rho_syn_value = rho_syn(p.objective.profile().kappa_f());
    rho_gda_by_instance[instance] =
        rho_gda(p.objective.profile().kappa_f(), pre.spectral.kappa_E);

    for (const std::string& algo : a.algos) {
      RunOptions opts;
      opts.algorithm = parse_algo(algo);
      opts.max_iter = a.max_iter;
      opts.force = a.force;
      opts.eta_one_minus_rho = a.eta_one_minus_rho;
      Entry entry;
      entry.label = algo + ":" + instance;
      entry.instance = instance;
      entry.record = run(p, pre, opts);
      entry.rho_gda_value = rho_gda_by_instance[instance];
      const std::string file = "run_" + algo + "_" + instance + ".csv";
      write_run_csv(dir / file, entry.record);
      config["runs"].push_back({{"label", entry.label}, {"csv", file}});
      entries.push_back(std::move(entry));
    }
  }

  std::ofstream(dir / "config.json") << config.dump(2) << "\n";

  // Merged wide CSV on the shared k grid (runs may stop early; missing cells
  // stay empty).
  long max_len = 0;
  for (const auto& e : entries)
    max_len = std::max(max_len, static_cast<long>(e.record.residuals_rel.size()));
  {
    std::ofstream merged(dir / "merged.csv");
    merged << "k";
    for (const auto& e : entries) merged << ",res_" << e.label;
    merged << "\n";
    for (long k = 0; k < max_len; ++k) {
      merged << k;
      for (const auto& e : entries) {
        merged << ",";
        if (k < static_cast<long>(e.record.residuals_rel.size()))
          merged << format_sig(e.record.residuals_rel[static_cast<std::size_t>(k)]);
      }
      merged << "\n";
    }
  }

  // Theoretical reference lines on the same k grid.
  {
    std::ofstream ref(dir / "reference.csv");
    ref << "k,rho_syn_k";
    for (const auto& [instance, value] : rho_gda_by_instance)
      ref << ",rho_gda_" << instance << "_k";
    ref << "\n";
    for (long k = 0; k < max_len; ++k) {
      ref << k << "," << format_sig(std::pow(rho_syn_value, static_cast<double>(k)));
      for (const auto& [instance, value] : rho_gda_by_instance)
        ref << "," << format_sig(std::pow(value, static_cast<double>(k)));
      ref << "\n";
    }
  }

  std::vector<LabelledRecord> labelled;
  labelled.reserve(entries.size());
  for (const auto& e : entries)
    labelled.push_back({e.label, &e.record, fit_policy_with_fallback(e.record)});
  auto table = compare(labelled);

  std::ofstream(dir / "report.txt") << table.to_text();
  std::ofstream(dir / "table.csv") << table.to_csv();
  std::cout << table.to_text();
  std::cout << "wrote experiment to " << dir.string() << "\n";
  return 0;
}

struct RatesArgs {
  double kf = 2000.0, kE = 10.0;
};

int cmd_rates(const RatesArgs& a) {
  if (a.kf < 1.0 || a.kE < 1.0) throw ParameterError("rates: need --kf >= 1 and --kE >= 1");
  const double rs = rho_syn(a.kf);
  const double rg = rho_gda(a.kf, a.kE);
  std::cout << "rho_syn = " << format_sig(rs) << "\n"
            << "rho_gda = " << format_sig(rg) << "\n";
  if (a.kE == 1.0) {
    std::cout << "warning: kappa_E = 1 degenerates the tuned GDA stepsize to zero "
                 "(rho_gda = 1, no iteration-count ratio)\n";
  } else if (rs < 1.0 && rg < 1.0) {
    std::cout << "iteration ratio log(rho_syn)/log(rho_gda) = "
              << format_sig(std::log(rs) / std::log(rg)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver and certification toolkit for equality-constrained strongly "
               "convex minimization"};
  app.require_subcommand(1);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "generate a random problem instance");
  gen->add_option("--n", ga.n, "primal dimension")->check(CLI::PositiveNumber);
  gen->add_option("--d", ga.d, "constraint rows (must equal --n)");
  gen->add_option("--m", ga.m, "strong convexity modulus");
  gen->add_option("--L", ga.L, "gradient Lipschitz constant");
  gen->add_option("--rank", ga.rank, "constraint rank");
  gen->add_option("--sigma-min", ga.sigma_min, "smallest nonzero singular value");
  gen->add_option("--sigma-max", ga.sigma_max, "largest singular value");
  gen->add_option("--law", ga.law, "interior spectrum law: loguniform|uniform");
  gen->add_option("--seed", ga.seed, "generator seed");
  gen->add_option("--out", ga.out, "output problem file");

  CertifyArgs ca;
  auto* cert = app.add_subcommand("certify", "run the synthesis certificate");
  cert->add_option("--problem", ca.problem, "problem file (spectrum read from it)");
  auto* om = cert->add_option("--m", ca.m, "strong convexity modulus");
  cert->add_option("--L", ca.L, "gradient Lipschitz constant");
  cert->add_option("--sigma-min", ca.sigma_min, "lower spectrum bound");
  cert->add_option("--sigma-max", ca.sigma_max, "upper spectrum bound");
  cert->add_option("--gamma-grid", ca.grids.gamma_points, "gamma grid points");
  cert->add_option("--theta-grid", ca.grids.theta_points, "unit-circle grid points");
  cert->add_option("--sigma-grid", ca.grids.sigma_points, "sigma grid points");
  cert->add_option("--out", ca.out, "certificate JSON output path");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "run one solver on a problem file");
  solve->add_option("--problem", sa.problem, "problem file")->required();
  solve->add_option("--algo", sa.algo, "synth|gda|gda-inc");
  solve->add_option("--max-iter", sa.max_iter, "iteration budget");
  solve->add_option("--tol", sa.tol, "stop when relative residual falls below");
  solve->add_option("--alpha1", sa.alpha1, "GDA primal stepsize override");
  solve->add_option("--alpha2", sa.alpha2, "GDA dual stepsize override");
  solve->add_flag("--eta-one-minus-rho", sa.eta_one_minus_rho,
                  "use eta = 1 - rho instead of 2/(L+m)");
  solve->add_flag("--force", sa.force, "bypass the rate-condition gate");
  solve->add_option("--x0", sa.x0, "initial iterate (only 'zero')");
  solve->add_option("--out", sa.out, "output directory");

  CompareArgs ma;
  auto* cmp = app.add_subcommand("compare", "run a problems x algorithms experiment");
  cmp->add_option("--problem", ma.problems, "problem file (repeatable)")->required();
  cmp->add_option("--algo", ma.algos, "algorithm (repeatable)")->required();
  cmp->add_option("--max-iter", ma.max_iter, "iteration budget");
  cmp->add_flag("--force", ma.force, "bypass the rate-condition gate");
  cmp->add_flag("--eta-one-minus-rho", ma.eta_one_minus_rho,
                "use eta = 1 - rho instead of 2/(L+m)");
  cmp->add_option("--out", ma.out, "output directory");

  RatesArgs ra;
  auto* rates = app.add_subcommand("rates", "print the theoretical rates");
  rates->add_option("--kf", ra.kf, "objective condition number");
  rates->add_option("--kE", ra.kE, "constraint condition number");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_generate(ga);
    if (cert->parsed()) {
      ca.explicit_params = om->count() > 0;
      return cmd_certify(ca);
    }
    if (solve->parsed()) return cmd_solve(sa);
    if (cmp->parsed()) return cmd_compare(ma);
    if (rates->parsed()) return cmd_rates(ra);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const RateConditionError& e) {
    std::cerr << "rate condition violated: " << e.what()
              << " (thresholds: 2/kappa_f = " << format_sig(e.theorem_threshold)
              << ", 2/(kappa_f+1) = " << format_sig(e.derivation_threshold) << ")\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return 3;
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
