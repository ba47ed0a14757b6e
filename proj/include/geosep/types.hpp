#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace geosep {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Sorted, duplicate-free coordinate/row indices.
using IndexSet = std::vector<int>;

// Thrown when a size cutoff makes the exact kappa oracle unavailable.
class CutoffExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an exact oracle (LP) fails numerically. Callers must treat
// this as "no answer", never as a value.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double norm_l1(const Vec& x);
double norm_l2(const Vec& x);

// lp norm for p in {1, 2}; anything else is rejected.
double lp_norm(const Vec& x, int p);

// Rejects NaN/Inf entries with a diagnostic naming `what`.
void require_finite(const Vec& x, const std::string& what);

// Validates a user-supplied index set against [0, bound): sorts it and
// rejects duplicates and out-of-range entries.
IndexSet normalize_index_set(IndexSet indices, int bound, const std::string& what);

}  // namespace geosep
