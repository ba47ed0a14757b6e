#include "geosep/solver.hpp"

#include "geosep/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace geosep {

std::string to_string(SolveMethod m) {
  return m == SolveMethod::iterative ? "iterative" : "lp_exact";
}

Vec soft_threshold(const Vec& v, double t) {
  if (t < 0.0) throw std::invalid_argument("soft_threshold: t must be >= 0");
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - t;
    out[i] = mag > 0.0 ? (v[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

std::pair<Vec, Vec> project_constraint(const Vec& x1, const Vec& x2,
                                       const CoordinatePartition& p,
                                       const Vec& known_values) {
  const int n = p.dimension();
  if (x1.size() != n || x2.size() != n || known_values.size() != n) {
    throw std::invalid_argument("project_constraint: dimension mismatch");
  }
  Vec a = x1;
  Vec b = x2;
  for (int i : p.known()) {
    const double r = (known_values[i] - a[i] - b[i]) / 2.0;
    a[i] += r;
    b[i] += r;
  }
  return {std::move(a), std::move(b)};
}

double objective_value(const ParsevalFrame& f1, const ParsevalFrame& f2, const Vec& x1,
                       const Vec& x2) {
  return norm_l1(f1.analyze(x1)) + norm_l1(f2.analyze(x2));
}

double feasibility_residual(const Vec& x1, const Vec& x2, const CoordinatePartition& p,
                            const Vec& x0_known) {
  const int n = p.dimension();
  if (x1.size() != n || x2.size() != n || x0_known.size() != n) {
    throw std::invalid_argument("feasibility_residual: dimension mismatch");
  }
  double r = 0.0;
  for (int i : p.known()) {
    r = std::max(r, std::abs(x1[i] + x2[i] - x0_known[i]));
  }
  return r;
}

namespace {

void check_problem(const ParsevalFrame& f1, const ParsevalFrame& f2,
                   const CoordinatePartition& p, const Vec& x0_known) {
  const int n = p.dimension();
  if (f1.cols() != n || f2.cols() != n) {
    throw std::invalid_argument("solve: frame dimension does not match partition");
  }
  if (x0_known.size() != n) {
    throw std::invalid_argument("solve: signal length does not match partition");
  }
  require_finite(x0_known, "solve input");
}

}  // namespace

SolveResult solve_iterative(const ParsevalFrame& f1, const ParsevalFrame& f2,
                            const CoordinatePartition& p, const Vec& x0_known,
                            const SolveOptions& opts) {
  check_problem(f1, f2, p, x0_known);
  if (opts.max_iters < 1 || opts.tol <= 0.0 || opts.step_primal <= 0.0 || opts.step_dual <= 0.0) {
    throw std::invalid_argument("solve_iterative: bad options");
  }
  if (opts.step_primal * opts.step_dual > 1.0 + 1e-12) {
    throw std::invalid_argument("solve_iterative: step_primal * step_dual must be <= 1");
  }

  const int n = p.dimension();
  const int m1 = f1.rows();
  const int m2 = f2.rows();
  const double tau = opts.step_primal;
  const double sigma = opts.step_dual;

  // Only the K-entries of x0_known are trusted.
  const Vec known = project_known(x0_known, p);

  Vec x1 = Vec::Zero(n), x2 = Vec::Zero(n);
  Vec x1_bar = x1, x2_bar = x2;
  Vec y1 = Vec::Zero(m1), y2 = Vec::Zero(m2);

  SolveResult res;
  res.method = SolveMethod::iterative;
  if (opts.record_trace) res.residual_trace.reserve(256);

  for (int k = 0; k < opts.max_iters; ++k) {
    // Dual ascent + clamp to the l-inf unit ball.
    Vec ny1 = (y1 + sigma * f1.analyze(x1_bar)).cwiseMax(-1.0).cwiseMin(1.0);
    Vec ny2 = (y2 + sigma * f2.analyze(x2_bar)).cwiseMax(-1.0).cwiseMin(1.0);

    // Primal descent + affine projection.
    auto [nx1, nx2] = project_constraint(x1 - tau * f1.synthesize(ny1),
                                         x2 - tau * f2.synthesize(ny2), p, known);

    // Fixed-point residual of the full iteration state: the primal can
    // stall transiently while the dual still ramps, so both changes count.
    const double z_norm = std::sqrt(x1.squaredNorm() + x2.squaredNorm());
    const double dz = std::sqrt((nx1 - x1).squaredNorm() + (nx2 - x2).squaredNorm());
    const double y_norm = std::sqrt(y1.squaredNorm() + y2.squaredNorm());
    const double dy = std::sqrt((ny1 - y1).squaredNorm() + (ny2 - y2).squaredNorm());
    const double feas = feasibility_residual(nx1, nx2, p, known);
    const double residual =
        std::max({feas, dz / (1.0 + z_norm), dy / (1.0 + y_norm)});
    y1 = std::move(ny1);
    y2 = std::move(ny2);

    x1_bar = 2.0 * nx1 - x1;
    x2_bar = 2.0 * nx2 - x2;
    x1 = std::move(nx1);
    x2 = std::move(nx2);

    if (opts.record_trace) res.residual_trace.push_back(residual);
    res.iterations = k + 1;
    if (residual <= opts.tol) {
      res.converged = true;
      break;
    }
  }

  res.x1_star = x1;
  res.x2_star = x2;
  res.objective = objective_value(f1, f2, x1, x2);
  res.feasibility_residual = feasibility_residual(x1, x2, p, known);
  return res;
}

SolveResult solve_lp_exact(const ParsevalFrame& f1, const ParsevalFrame& f2,
                           const CoordinatePartition& p, const Vec& x0_known) {
  check_problem(f1, f2, p, x0_known);
  const int n = p.dimension();
  const int m1 = f1.rows();
  const int m2 = f2.rows();
  if (n > kLpExactMaxN || m1 + m2 > kLpExactMaxRows) {
    throw CutoffExceeded("solve_lp_exact: instance exceeds the desk-scale cutoff (n <= " +
                         std::to_string(kLpExactMaxN) + ", m1+m2 <= " +
                         std::to_string(kLpExactMaxRows) + ")");
  }

  const Vec known = project_known(x0_known, p);
  const int nk = static_cast<int>(p.known().size());
  const int mt = m1 + m2;

  // Columns: x1+ (n), x1- (n), x2+ (n), x2- (n), t (mt), slack (2*mt).
  // Rows:  (f x)_i - t_i + s = 0,  -(f x)_i - t_i + s = 0  per coefficient,
  // then (x1 + x2)_i = x0_i on K.
  const int cols = 4 * n + mt + 2 * mt;
  const int rows = 2 * mt + nk;
  Mat A = Mat::Zero(rows, cols);
  Vec b = Vec::Zero(rows);
  Vec c = Vec::Zero(cols);
  c.segment(4 * n, mt).setOnes();

  const Mat& phi1 = f1.analysis();
  const Mat& phi2 = f2.analysis();
  for (int i = 0; i < mt; ++i) {
    const bool first = i < m1;
    const int xp = first ? 0 : 2 * n;  // x+ block offset for this frame
    const Eigen::RowVectorXd row =
        first ? phi1.row(i) : static_cast<Eigen::RowVectorXd>(phi2.row(i - m1));
    // (f x)_i - t_i + s = 0
    A.block(2 * i, xp, 1, n) = row;
    A.block(2 * i, xp + n, 1, n) = -row;
    A(2 * i, 4 * n + i) = -1.0;
    A(2 * i, 4 * n + mt + 2 * i) = 1.0;
    // -(f x)_i - t_i + s = 0
    A.block(2 * i + 1, xp, 1, n) = -row;
    A.block(2 * i + 1, xp + n, 1, n) = row;
    A(2 * i + 1, 4 * n + i) = -1.0;
    A(2 * i + 1, 4 * n + mt + 2 * i + 1) = 1.0;
  }
  for (int r = 0; r < nk; ++r) {
    const int i = p.known()[static_cast<size_t>(r)];
    A(2 * mt + r, i) = 1.0;
    A(2 * mt + r, n + i) = -1.0;
    A(2 * mt + r, 2 * n + i) = 1.0;
    A(2 * mt + r, 3 * n + i) = -1.0;
    b(2 * mt + r) = known[i];
  }

  const LpResult lp = solve_lp_standard(A, b, c);
  if (lp.status != LpStatus::optimal) {
    throw OracleFailure("solve_lp_exact: simplex did not reach an optimum (status " +
                        std::to_string(static_cast<int>(lp.status)) + ")");
  }

  SolveResult res;
  res.method = SolveMethod::lp_exact;
  res.x1_star = lp.x.segment(0, n) - lp.x.segment(n, n);
  res.x2_star = lp.x.segment(2 * n, n) - lp.x.segment(3 * n, n);
  res.objective = objective_value(f1, f2, res.x1_star, res.x2_star);
  res.feasibility_residual = feasibility_residual(res.x1_star, res.x2_star, p, known);
  res.iterations = lp.pivots;
  res.converged = true;
  return res;
}

}  // namespace geosep
