#include "geosep/types.hpp"

#include <algorithm>
#include <cmath>

namespace geosep {

double norm_l1(const Vec& x) { return x.lpNorm<1>(); }

double norm_l2(const Vec& x) { return x.norm(); }

double lp_norm(const Vec& x, int p) {
  require_finite(x, "norm argument");
  switch (p) {
    case 1:
      return norm_l1(x);
    case 2:
      return norm_l2(x);
    default:
      throw std::invalid_argument("lp_norm: p must be 1 or 2, got " + std::to_string(p));
  }
}

void require_finite(const Vec& x, const std::string& what) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw std::invalid_argument(what + ": non-finite entry at index " + std::to_string(i));
    }
  }
}

IndexSet normalize_index_set(IndexSet indices, int bound, const std::string& what) {
  std::sort(indices.begin(), indices.end());
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= bound) {
      throw std::invalid_argument(what + ": index " + std::to_string(indices[i]) +
                                  " out of range [0, " + std::to_string(bound) + ")");
    }
    if (i > 0 && indices[i] == indices[i - 1]) {
      throw std::invalid_argument(what + ": duplicate index " + std::to_string(indices[i]));
    }
  }
  return indices;
}

}  // namespace geosep
