#include "eqsynth/analysis.hpp"

#include <cmath>
#include <sstream>

namespace eqsynth {

RateFit fit_rate(const RunRecord& record, const FitPolicy& policy) {
  const std::vector<double>& r = record.residuals;
  const long count = static_cast<long>(r.size());
  if (count < 2) throw InsufficientDataError("fit_rate: empty record");
  const double r0 = r.front();

  long lo = 0, hi = count - 1;
  if (policy.auto_window) {
    // Maximal window where the residual sits between the transient and the
    // numerical floor, then trimmed at both ends.
    lo = -1;
    hi = -1;
    for (long k = 0; k < count; ++k) {
      const bool inside = r[static_cast<std::size_t>(k)] <= policy.upper_rel * r0 &&
                          r[static_cast<std::size_t>(k)] >= policy.lower_rel * r0 &&
                          r[static_cast<std::size_t>(k)] > 0.0;
      if (inside) {
        if (lo < 0) lo = k;
        hi = k;
      }
    }
    if (lo < 0) throw InsufficientDataError("fit_rate: no samples inside the auto window");
    const long trim = static_cast<long>(policy.trim_fraction * static_cast<double>(hi - lo));
    lo += trim;
    hi -= trim;
  } else {
    lo = policy.k_start;
    hi = policy.k_end;
    if (lo < 0 || hi >= count || lo >= hi)
      throw InsufficientDataError("fit_rate: explicit window out of range");
  }
  if (hi - lo + 1 < 20)
    throw InsufficientDataError("fit_rate: window shorter than 20 points");

  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0, syy = 0.0;
  long n = 0;
  for (long k = lo; k <= hi; ++k) {
    const double rk = r[static_cast<std::size_t>(k)];
    if (!(rk > 0.0))
      throw InsufficientDataError("fit_rate: nonpositive residual inside window");
    const double y = std::log(rk);
    const double kk = static_cast<double>(k);
    sk += kk;
    sy += y;
    skk += kk * kk;
    sky += kk * y;
    syy += y * y;
    ++n;
  }
  const double denom = n * skk - sk * sk;
  const double slope = (n * sky - sk * sy) / denom;
  const double intercept = (sy - slope * sk) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  const double y_mean = sy / n;
  for (long k = lo; k <= hi; ++k) {
    const double y = std::log(r[static_cast<std::size_t>(k)]);
    const double fit = intercept + slope * static_cast<double>(k);
    ss_res += (y - fit) * (y - fit);
    ss_tot += (y - y_mean) * (y - y_mean);
  }

  RateFit out;
  out.rho_emp = std::exp(slope);
  out.M_emp = std::exp(intercept) / r0;
  out.k_start = lo;
  out.k_end = hi;
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

namespace {

// Spectral radius excluding memory modes that never reach the iterate:
// eigenvalues within 1e-6 of one whose eigenvector has no component in the
// leading x block.
double filtered_radius(const Eigen::MatrixXd& T, Eigen::Index n_x, int* excluded) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(T);
  double radius = 0.0;
  int skipped = 0;
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    const std::complex<double> ev = es.eigenvalues()(i);
    if (std::abs(ev - std::complex<double>(1.0, 0.0)) < 1e-6) {
      const Eigen::VectorXcd v = es.eigenvectors().col(i);
      if (v.head(n_x).norm() <= 1e-8 * v.norm()) {
        ++skipped;
        continue;
      }
    }
    radius = std::max(radius, std::abs(ev));
  }
  if (excluded) *excluded = skipped;
  return radius;
}

}  // namespace

IterationMatrix iteration_matrix(Algorithm algorithm, const QuadraticInstance& quad,
                                 const PreprocessedProblem& pre,
                                 const IterationMatrixOptions& options) {
  const Eigen::Index n = quad.dim();
  const ConvexityProfile& profile = quad.profile;
  const Eigen::MatrixXd& E = pre.E_norm;
  if (E.rows() != n) throw ParameterError("iteration_matrix: dimension mismatch");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

  IterationMatrix out;
  if (algorithm == Algorithm::Synthesized) {
    const double rho = (profile.L - profile.m) / (profile.L + profile.m);
    const double rho2 = rho * rho;
    const double eta = options.eta_one_minus_rho ? (1.0 - rho)
                                                     : 2.0 / (profile.L + profile.m);
    const Eigen::MatrixXd W = I - E;
    const Eigen::MatrixXd A = I - eta * quad.Q;  // u = A x - eta p
    const Eigen::VectorXd pu = -eta * quad.p;

    // State (x, y_prev, u_prev).
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    T.block(0, 0, n, n) = rho2 * I + W * A;
    T.block(0, n, n, n) = W - I;
    T.block(0, 2 * n, n, n) = -rho2 * I;
    T.block(n, 0, n, n) = W * A;
    T.block(n, n, n, n) = W;
    T.block(n, 2 * n, n, n) = -rho2 * I;
    T.block(2 * n, 0, n, n) = A;

    Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * n);
    b.segment(0, n) = W * pu;
    b.segment(n, n) = W * pu;
    b.segment(2 * n, n) = pu;

    out.T = std::move(T);
    out.offset = std::move(b);
  } else {
    const Eigen::Index d = E.rows();
    double a1 = options.alpha1, a2 = options.alpha2;
    if (a1 == 0.0 && a2 == 0.0) {
      const GdaStepsizes s = gda_stepsizes(profile, pre.spectral.sigma_max,
                                           pre.spectral.kappa_E);
      a1 = s.alpha1;
      a2 = s.alpha2;
    }
    const Eigen::MatrixXd Ax = I - a1 * quad.Q;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n + d, n + d);
    T.block(0, 0, n, n) = Ax;
    T.block(0, n, n, d) = -a1 * E.transpose();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + d);
    b.head(n) = -a1 * quad.p;
    if (algorithm == Algorithm::GdaIncremental) {
      T.block(n, 0, d, n) = a2 * E * Ax;
      T.block(n, n, d, d) = Eigen::MatrixXd::Identity(d, d) - a1 * a2 * E * E.transpose();
      b.tail(d) = a2 * E * b.head(n);
    } else {
      T.block(n, 0, d, n) = a2 * E;
      T.block(n, n, d, d) = Eigen::MatrixXd::Identity(d, d);
    }
    out.T = std::move(T);
    out.offset = std::move(b);
  }

  out.spectral_radius = filtered_radius(out.T, n, &out.marginal_modes_excluded);
  return out;
}

namespace {

long first_below(const std::vector<double>& rel, double threshold) {
  for (std::size_t k = 0; k < rel.size(); ++k)
    if (rel[k] <= threshold) return static_cast<long>(k);
  return -1;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ComparisonTable compare(const std::vector<LabelledRecord>& records) {
  if (records.empty()) throw ParameterError("compare: need at least one record");
  ComparisonTable table;
  for (const LabelledRecord& lr : records) {
    ComparisonRow row;
    row.label = lr.label;
    row.fit = fit_rate(*lr.record, lr.fit_policy);
    row.rho_theory = lr.record->rho_theory;
    row.k_to_1e3 = first_below(lr.record->residuals_rel, 1e-3);
    row.k_to_1e6 = first_below(lr.record->residuals_rel, 1e-6);
    row.k_to_1e9 = first_below(lr.record->residuals_rel, 1e-9);
    table.rows.push_back(std::move(row));
  }
  const Eigen::Index count = static_cast<Eigen::Index>(table.rows.size());
  table.pairwise_rate_diff.setZero(count, count);
  for (Eigen::Index i = 0; i < count; ++i)
    for (Eigen::Index j = 0; j < count; ++j)
      table.pairwise_rate_diff(i, j) =
          std::abs(table.rows[static_cast<std::size_t>(i)].fit.rho_emp -
                   table.rows[static_cast<std::size_t>(j)].fit.rho_emp);
  return table;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream os;
  os << "algorithm,instance,rho_emp,M_emp,rho_theory,k_to_1e-3,k_to_1e-6,k_to_1e-9,"
        "r_squared\n";
  for (const ComparisonRow& row : rows) {
    // Labels are "<algorithm>:<instance>"; a bare label lands in `instance`.
    std::string algo = row.label, inst = row.label;
    const auto colon = row.label.find(':');
    if (colon != std::string::npos) {
      algo = row.label.substr(0, colon);
      inst = row.label.substr(colon + 1);
    }
    os << algo << ',' << inst << ',' << fmt17(row.fit.rho_emp) << ','
       << fmt17(row.fit.M_emp) << ',' << fmt17(row.rho_theory) << ',' << row.k_to_1e3
       << ',' << row.k_to_1e6 << ',' << row.k_to_1e9 << ',' << fmt17(row.fit.r_squared)
       << '\n';
  }
  return os.str();
}

std::string ComparisonTable::to_text() const {
  std::ostringstream os;
  os << "run                          rho_emp        rho_theory     k@1e-6\n";
  for (const ComparisonRow& row : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-28s %.9f    %.9f    %ld\n", row.label.c_str(),
                  row.fit.rho_emp, row.rho_theory, row.k_to_1e6);
    os << line;
  }
  if (rows.size() > 1) {
    double max_diff = 0.0;
    for (Eigen::Index i = 0; i < pairwise_rate_diff.rows(); ++i)
      for (Eigen::Index j = 0; j < pairwise_rate_diff.cols(); ++j)
        max_diff = std::max(max_diff, pairwise_rate_diff(i, j));
    os << "max pairwise |rho_emp difference| = " << fmt17(max_diff) << '\n';
  }
  return os.str();
}

}  // namespace eqsynth
