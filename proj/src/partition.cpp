#include "geosep/partition.hpp"

namespace geosep {

CoordinatePartition::CoordinatePartition(int n, IndexSet known) : n_(n) {
  if (n < 1) throw std::invalid_argument("partition: dimension must be >= 1");
  known_ = normalize_index_set(std::move(known), n, "partition known set");
  mask_.assign(static_cast<size_t>(n), 0);
  for (int i : known_) mask_[static_cast<size_t>(i)] = 1;
  missing_.reserve(static_cast<size_t>(n) - known_.size());
  for (int i = 0; i < n; ++i) {
    if (!mask_[static_cast<size_t>(i)]) missing_.push_back(i);
  }
}

CoordinatePartition make_partition(int n, IndexSet known) {
  return CoordinatePartition(n, std::move(known));
}

namespace {

void check_dimension(const Vec& x, const CoordinatePartition& p) {
  if (x.size() != p.dimension()) {
    throw std::invalid_argument("projection: signal length " + std::to_string(x.size()) +
                                " does not match partition dimension " +
                                std::to_string(p.dimension()));
  }
}

}  // namespace

Vec project_known(const Vec& x, const CoordinatePartition& p) {
  check_dimension(x, p);
  Vec out = Vec::Zero(x.size());
  for (int i : p.known()) out[i] = x[i];
  return out;
}

Vec project_missing(const Vec& x, const CoordinatePartition& p) {
  check_dimension(x, p);
  Vec out = Vec::Zero(x.size());
  for (int i : p.missing()) out[i] = x[i];
  return out;
}

}  // namespace geosep
