#pragma once

#include "geosep/frame.hpp"
#include "geosep/partition.hpp"
#include "geosep/types.hpp"

#include <cstdint>
#include <limits>
#include <string>

namespace geosep {

// Above this many stacked frame rows (m1 + m2) the sign-pattern oracle is
// refused and only the sampled lower bound is offered.
inline constexpr int kDefaultKappaCutoff = 18;

struct SupportPair {
  IndexSet lambda1;  // subset of {0..m1-1}
  IndexSet lambda2;  // subset of {0..m2-1}
};

enum class KappaKind { exact, lower_bound };

std::string to_string(KappaKind kind);

struct Certificate {
  double delta = 0.0;
  double kappa = 0.0;
  KappaKind kappa_kind = KappaKind::exact;
  // 2*delta/(1-2*kappa) when kappa < 1/2, +inf otherwise. Only an exact
  // kappa certifies the bound; with a lower bound it is "not certified".
  double bound = std::numeric_limits<double>::infinity();
  // Set when the feasible set carried no nonzero coefficients (kappa
  // defined as 0 by convention). Cannot occur with injective frames.
  bool degenerate = false;

  bool certified() const { return kappa_kind == KappaKind::exact && kappa < 0.5; }
};

// l1 mass of the components' coefficients outside the supports:
// sum of |coeff| over lambda1^c for f1*x1 plus lambda2^c for f2*x2.
// This is the smallest admissible sparsity defect for this data.
double compute_delta(const ParsevalFrame& f1, const ParsevalFrame& f2,
                     const Vec& x1, const Vec& x2, const SupportPair& s);

// Indices of the k largest-magnitude coefficients of each component;
// magnitude ties break toward the lower index.
SupportPair select_supports(const ParsevalFrame& f1, const ParsevalFrame& f2,
                            const Vec& x1, const Vec& x2, int k1, int k2);

IndexSet top_k_indices(const Vec& coeffs, int k);

// Concentration ratio of one feasible pair (u, x), u = y + P_K x:
//   (||1_L1 f1 u||_1 + ||1_L2 f2 x||_1) / (||f1 u||_1 + ||f2 x||_1).
// Requires P_K u = P_K x within 1e-10 and a nonzero denominator.
double joint_ratio(const ParsevalFrame& f1, const ParsevalFrame& f2,
                   const CoordinatePartition& p, const SupportPair& s,
                   const Vec& u, const Vec& x);

struct KappaOptions {
  int cutoff = kDefaultKappaCutoff;
  int threads = 0;  // 0: hardware concurrency
};

// Joint concentration: supremum of joint_ratio over all feasible pairs.
// Exact via sign-pattern enumeration: the ratio is 0-homogeneous and
// piecewise linear on the feasibility subspace, so per sign pattern the
// supremum is a small LP (maximize the linearized numerator subject to
// sign consistency and linearized denominator == 1); kappa is the max
// over feasible patterns. Throws CutoffExceeded when m1 + m2 > cutoff.
double kappa_exact(const ParsevalFrame& f1, const ParsevalFrame& f2,
                   const CoordinatePartition& p, const SupportPair& s,
                   const KappaOptions& opts = {});

// Max of joint_ratio over seeded Gaussian feasible pairs, then coordinate
// ascent from the best sample (exact line maxima over the breakpoints of
// the piecewise-linear ratio). Always a valid lower bound; deterministic
// per seed.
double kappa_lower_estimate(const ParsevalFrame& f1, const ParsevalFrame& f2,
                            const CoordinatePartition& p, const SupportPair& s,
                            int samples, std::uint64_t seed);

// 2*delta/(1-2*kappa) for kappa < 1/2, +inf otherwise (vacuous regime).
double error_bound(double delta, double kappa);

struct CertifyOptions {
  bool exact = true;          // false: sampled lower bound
  int samples = 1000;         // for the lower bound
  std::uint64_t seed = 1;     // for the lower bound
  KappaOptions kappa = {};
};

// Bundles delta, kappa and the bound for one instance.
Certificate certify(const ParsevalFrame& f1, const ParsevalFrame& f2,
                    const CoordinatePartition& p, const SupportPair& s,
                    const Vec& x1, const Vec& x2,
                    const CertifyOptions& opts = {});

}  // namespace geosep
