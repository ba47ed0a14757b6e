#include "geosep/simplex.hpp"

#include <cmath>

namespace geosep {

namespace {

// Tableau layout: columns [0, n) structural, [n, n+m) artificial, last is
// the rhs. basis[i] == -1 marks a zeroed redundant row.
struct Tableau {
  Mat t;
  std::vector<int> basis;
  int m;
  int n;

  double& rhs(int i) { return t(i, n + m); }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    t(row, col) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) {
        t.row(i) -= f * t.row(row);
        t(i, col) = 0.0;
      }
    }
    // Snap cancellation residue on the rhs to exact zero. The kappa
    // pattern LPs are degenerate (all-but-one rhs zero); Bland's rule only
    // terminates when equal ratios compare exactly equal, so the ties must
    // stay exact across pivots.
    for (int i = 0; i < m; ++i) {
      double& r = rhs(i);
      if (r != 0.0 && std::abs(r) <= 1e-13) r = 0.0;
    }
    basis[static_cast<size_t>(row)] = col;
  }
};

// One simplex phase over `obj` (a full tableau-width row, reduced against
// the current basis by the caller). Entering variable: lowest-index column
// in [0, limit) with a negative reduced cost (Bland). Leaving variable:
// min-ratio row, ties toward the lowest basis index (Bland).
LpStatus run_phase(Tableau& tab, Eigen::RowVectorXd& obj, int limit, const LpOptions& opts,
                   int& pivots_left) {
  for (;;) {
    int entering = -1;
    for (int j = 0; j < limit; ++j) {
      if (obj(j) < -opts.pivot_tol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return LpStatus::optimal;

    // Bland needs exact comparisons here: these LPs are heavily degenerate
    // (mostly zero right-hand sides) and a fuzzy tie-break can cycle.
    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < tab.m; ++i) {
      if (tab.basis[static_cast<size_t>(i)] < 0) continue;
      const double a = tab.t(i, entering);
      if (a <= opts.pivot_tol) continue;
      const double ratio = std::max(tab.rhs(i), 0.0) / a;
      if (leaving < 0 || ratio < best_ratio ||
          (ratio == best_ratio &&
           tab.basis[static_cast<size_t>(i)] < tab.basis[static_cast<size_t>(leaving)])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving < 0) return LpStatus::unbounded;

    if (--pivots_left < 0) return LpStatus::iteration_limit;
    tab.pivot(leaving, entering);
    const double f = obj(entering);
    if (f != 0.0) {
      obj -= f * tab.t.row(leaving);
      obj(entering) = 0.0;
    }
  }
}

}  // namespace

LpResult solve_lp_standard(const Mat& A, const Vec& b, const Vec& c, const LpOptions& opts) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n) {
    throw std::invalid_argument("solve_lp_standard: inconsistent dimensions");
  }
  if (m < 1 || n < 1) {
    throw std::invalid_argument("solve_lp_standard: empty problem");
  }

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.t.resize(m, n + m + 1);
  tab.t.leftCols(n) = A;
  tab.t.middleCols(n, m) = Mat::Identity(m, m);
  tab.t.col(n + m) = b;
  for (int i = 0; i < m; ++i) {
    if (tab.t(i, n + m) < 0.0) tab.t.row(i) = -tab.t.row(i);
  }
  tab.basis.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) tab.basis[static_cast<size_t>(i)] = n + i;

  int pivots_left = opts.max_pivots > 0 ? opts.max_pivots : 20000 + 200 * (m + n);
  const int pivots_total = pivots_left;
  LpResult result;

  // Phase 1: minimize the artificial sum. Reduced objective row: cost 1 on
  // artificials minus the sum of all rows (every artificial starts basic).
  Eigen::RowVectorXd obj = Eigen::RowVectorXd::Zero(n + m + 1);
  obj.segment(n, m).setOnes();
  for (int i = 0; i < m; ++i) obj -= tab.t.row(i);

  LpStatus status = run_phase(tab, obj, n + m, opts, pivots_left);
  if (status == LpStatus::iteration_limit) {
    result.status = status;
    result.pivots = pivots_total;
    return result;
  }
  double phase1 = 0.0;
  for (int i = 0; i < m; ++i) {
    if (tab.basis[static_cast<size_t>(i)] >= n) phase1 += tab.rhs(i);
  }
  if (phase1 > opts.feas_tol) {
    result.status = LpStatus::infeasible;
    result.pivots = pivots_total - pivots_left;
    return result;
  }

  // Drive leftover artificials out of the basis; rows with no structural
  // pivot entry are redundant and get zeroed.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[static_cast<size_t>(i)] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > opts.pivot_tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      tab.t.row(i).setZero();
      tab.basis[static_cast<size_t>(i)] = -1;
    }
  }

  // Phase 2 over the structural columns only.
  obj.setZero();
  obj.head(n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bi = tab.basis[static_cast<size_t>(i)];
    if (bi >= 0 && bi < n && c(bi) != 0.0) obj -= c(bi) * tab.t.row(i);
  }
  status = run_phase(tab, obj, n, opts, pivots_left);
  result.pivots = pivots_total - pivots_left;
  result.status = status;
  if (status != LpStatus::optimal) return result;

  result.x = Vec::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int bi = tab.basis[static_cast<size_t>(i)];
    if (bi >= 0 && bi < n) result.x(bi) = tab.rhs(i);
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace geosep
