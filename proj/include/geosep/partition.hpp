#pragma once

#include "geosep/types.hpp"

namespace geosep {

// Splits coordinates {0..n-1} into known (K) and missing (M) sets. The
// associated projections P_K, P_M are coordinate masks.
class CoordinatePartition {
 public:
  // `known` may be unsorted; it is validated against [0, n).
  CoordinatePartition(int n, IndexSet known);

  int dimension() const { return n_; }
  const IndexSet& known() const { return known_; }
  const IndexSet& missing() const { return missing_; }
  bool is_known(int i) const { return mask_[static_cast<size_t>(i)] != 0; }

 private:
  int n_;
  IndexSet known_;
  IndexSet missing_;
  std::vector<char> mask_;
};

CoordinatePartition make_partition(int n, IndexSet known);

// P_K x: entries on K kept, entries on M zeroed.
Vec project_known(const Vec& x, const CoordinatePartition& p);

// P_M x: complement mask; project_known(x) + project_missing(x) == x.
Vec project_missing(const Vec& x, const CoordinatePartition& p);

}  // namespace geosep
