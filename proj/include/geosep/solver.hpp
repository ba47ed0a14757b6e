#pragma once

#include "geosep/frame.hpp"
#include "geosep/partition.hpp"
#include "geosep/types.hpp"

#include <utility>
#include <vector>

namespace geosep {

// Exact LP reformulation cutoffs (dense simplex stays trustworthy and fast).
inline constexpr int kLpExactMaxN = 30;
inline constexpr int kLpExactMaxRows = 60;

struct SolveOptions {
  int max_iters = 100000;
  // Convergence threshold on max(feasibility residual, normalized iterate
  // change ||z_{k+1} - z_k||_2 / (1 + ||z_k||_2)).
  double tol = 1e-9;
  // step_primal * step_dual <= 1 required; the stacked Parseval analysis
  // operator has norm exactly 1, so the defaults always converge.
  double step_primal = 0.99;
  double step_dual = 0.99;
  bool record_trace = false;
};

enum class SolveMethod { iterative, lp_exact };

std::string to_string(SolveMethod m);

struct SolveResult {
  Vec x1_star;
  Vec x2_star;
  double objective = 0.0;
  double feasibility_residual = 0.0;  // l-inf norm of P_K(x1 + x2 - x0)
  int iterations = 0;
  bool converged = false;
  SolveMethod method = SolveMethod::iterative;
  std::vector<double> residual_trace;  // per-iteration, when recorded
};

// Entrywise sign(v_i) * max(|v_i| - t, 0): proximal map of t*||.||_1.
Vec soft_threshold(const Vec& v, double t);

// Euclidean projection of (x1, x2) onto {(a, b) : a_i + b_i = known_i  for
// i in K}: split the constraint violation evenly between the components.
std::pair<Vec, Vec> project_constraint(const Vec& x1, const Vec& x2,
                                       const CoordinatePartition& p,
                                       const Vec& known_values);

// ||f1 x1||_1 + ||f2 x2||_1
double objective_value(const ParsevalFrame& f1, const ParsevalFrame& f2,
                       const Vec& x1, const Vec& x2);

// max over i in K of |x1_i + x2_i - x0_i|; 0 when K is empty.
double feasibility_residual(const Vec& x1, const Vec& x2,
                            const CoordinatePartition& p, const Vec& x0_known);

// Primal-dual hybrid gradient iteration on
//   min ||f1 x1||_1 + ||f2 x2||_1  s.t.  P_K(x1 + x2) = P_K(x0).
// Dual step clamps to [-1, 1] (prox of the l1 conjugate); primal step is
// the closed-form affine projection. Entries of x0_known on M are ignored.
SolveResult solve_iterative(const ParsevalFrame& f1, const ParsevalFrame& f2,
                            const CoordinatePartition& p, const Vec& x0_known,
                            const SolveOptions& opts = {});

// Ground-truth oracle: the same problem as one LP over (x1, x2, t1, t2)
// with -t <= f x <= t, minimizing sum(t1) + sum(t2), solved by the dense
// two-phase simplex. Returns an exact vertex minimizer at desk scale.
SolveResult solve_lp_exact(const ParsevalFrame& f1, const ParsevalFrame& f2,
                           const CoordinatePartition& p, const Vec& x0_known);

}  // namespace geosep
