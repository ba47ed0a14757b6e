#pragma once

#include "geosep/types.hpp"

namespace geosep {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  Vec x;           // primal solution, valid when status == optimal
  int pivots = 0;  // total pivots across both phases
};

struct LpOptions {
  double pivot_tol = 1e-9;   // entries below this are treated as zero
  double feas_tol = 1e-7;    // phase-1 objective threshold for feasibility
  int max_pivots = 0;        // 0: choose from problem size
};

// Minimize c^T x subject to A x = b, x >= 0, via a dense two-phase tableau
// simplex with Bland's anti-cycling rule. Small and deterministic; this is
// the single LP engine behind the exact solver and the kappa oracle.
LpResult solve_lp_standard(const Mat& A, const Vec& b, const Vec& c,
                           const LpOptions& opts = {});

}  // namespace geosep
