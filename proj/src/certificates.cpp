#include "geosep/certificates.hpp"

#include "geosep/rng.hpp"
#include "geosep/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

namespace geosep {

std::string to_string(KappaKind kind) {
  return kind == KappaKind::exact ? "exact" : "lower_bound";
}

namespace {

void check_supports(const ParsevalFrame& f1, const ParsevalFrame& f2, const SupportPair& s) {
  normalize_index_set(s.lambda1, f1.rows(), "lambda1");
  normalize_index_set(s.lambda2, f2.rows(), "lambda2");
}

void check_pair_dims(const ParsevalFrame& f1, const ParsevalFrame& f2,
                     const CoordinatePartition& p) {
  if (f1.cols() != p.dimension() || f2.cols() != p.dimension()) {
    throw std::invalid_argument("certificates: frame dimension does not match partition");
  }
}

// Stacked coefficient map of the feasibility subspace S = {P_K u = P_K x}:
// columns are shared K-coordinates, then free u-coordinates on M, then
// free x-coordinates on M. Row i < m1 is a coefficient of f1 applied to u;
// row m1 + i is a coefficient of f2 applied to x. Injective because the
// analysis operators are.
struct FeasibleMap {
  Mat rows;                 // (m1 + m2) x d
  std::vector<char> on_support;  // per row, 1 if indexed by the supports
  int m1 = 0;
  int m2 = 0;
  int d = 0;
};

FeasibleMap build_feasible_map(const ParsevalFrame& f1, const ParsevalFrame& f2,
                               const CoordinatePartition& p, const SupportPair& s) {
  const int m1 = f1.rows();
  const int m2 = f2.rows();
  const int nk = static_cast<int>(p.known().size());
  const int nm = static_cast<int>(p.missing().size());
  FeasibleMap map;
  map.m1 = m1;
  map.m2 = m2;
  map.d = nk + 2 * nm;
  map.rows = Mat::Zero(m1 + m2, map.d);
  int col = 0;
  for (int i : p.known()) {
    map.rows.col(col).head(m1) = f1.analysis().col(i);
    map.rows.col(col).tail(m2) = f2.analysis().col(i);
    ++col;
  }
  for (int i : p.missing()) {
    map.rows.col(col).head(m1) = f1.analysis().col(i);
    ++col;
  }
  for (int i : p.missing()) {
    map.rows.col(col).tail(m2) = f2.analysis().col(i);
    ++col;
  }
  map.on_support.assign(static_cast<size_t>(m1 + m2), 0);
  for (int i : s.lambda1) map.on_support[static_cast<size_t>(i)] = 1;
  for (int i : s.lambda2) map.on_support[static_cast<size_t>(m1 + i)] = 1;
  return map;
}

// Concentration ratio of coefficients a; the denominator is accumulated as
// on-support + off-support mass so the ratio never exceeds 1 in floating
// point.
double coefficient_ratio(const Vec& a, const std::vector<char>& on_support) {
  double num = 0.0, rest = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    (on_support[static_cast<size_t>(i)] ? num : rest) += std::abs(a[i]);
  }
  const double denom = num + rest;
  if (denom <= 0.0) return -1.0;  // caller decides; only z = 0 lands here
  return num / denom;
}

struct PatternLp {
  bool feasible = false;
  double value = 0.0;
};

// One sign pattern: maximize the linearized on-support mass subject to
// sign consistency and linearized total mass == 1. Variables z = p - q
// plus one slack per sign row.
PatternLp solve_pattern(const FeasibleMap& map, const std::vector<double>& sigma) {
  const int mt = map.m1 + map.m2;
  const int d = map.d;
  const int cols = 2 * d + mt;
  Mat A = Mat::Zero(mt + 1, cols);
  Vec b = Vec::Zero(mt + 1);
  Vec c = Vec::Zero(cols);
  Eigen::RowVectorXd denom_row = Eigen::RowVectorXd::Zero(d);
  Eigen::RowVectorXd numer_row = Eigen::RowVectorXd::Zero(d);
  for (int i = 0; i < mt; ++i) {
    const Eigen::RowVectorXd signed_row = sigma[static_cast<size_t>(i)] * map.rows.row(i);
    A.block(i, 0, 1, d) = signed_row;
    A.block(i, d, 1, d) = -signed_row;
    A(i, 2 * d + i) = -1.0;
    denom_row += signed_row;
    if (map.on_support[static_cast<size_t>(i)]) numer_row += signed_row;
  }
  A.block(mt, 0, 1, d) = denom_row;
  A.block(mt, d, 1, d) = -denom_row;
  b(mt) = 1.0;
  c.head(d) = -numer_row.transpose();
  c.segment(d, d) = numer_row.transpose();

  const LpResult lp = solve_lp_standard(A, b, c);
  if (lp.status == LpStatus::infeasible) return {};
  if (lp.status != LpStatus::optimal) {
    throw OracleFailure("kappa_exact: pattern LP failed (status " +
                        std::to_string(static_cast<int>(lp.status)) + ")");
  }
  return {true, -lp.objective};
}

struct KappaExactResult {
  double value = 0.0;
  bool degenerate = false;
};

KappaExactResult kappa_exact_impl(const ParsevalFrame& f1, const ParsevalFrame& f2,
                                  const CoordinatePartition& p, const SupportPair& s,
                                  const KappaOptions& opts) {
  check_pair_dims(f1, f2, p);
  check_supports(f1, f2, s);
  const int mt = f1.rows() + f2.rows();
  if (mt > opts.cutoff) {
    throw CutoffExceeded("kappa_exact: m1 + m2 = " + std::to_string(mt) +
                         " exceeds the sign-pattern cutoff " + std::to_string(opts.cutoff) +
                         "; use kappa_lower_estimate instead");
  }
  if (s.lambda1.empty() && s.lambda2.empty()) return {0.0, false};
  if (static_cast<int>(s.lambda1.size()) == f1.rows() &&
      static_cast<int>(s.lambda2.size()) == f2.rows()) {
    return {1.0, false};
  }

  const FeasibleMap map = build_feasible_map(f1, f2, p, s);

  // The ratio is even under z -> -z, so the sign of row 0 can be fixed.
  const std::uint64_t total = 1ULL << (mt - 1);
  int nthreads = opts.threads > 0 ? opts.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::clamp(nthreads, 1, 32);
  if (total < 256) nthreads = 1;

  std::vector<double> best(static_cast<size_t>(nthreads), -1.0);
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&](int tid) {
    try {
      std::vector<double> sigma(static_cast<size_t>(mt), 1.0);
      double local = -1.0;
      for (std::uint64_t code = static_cast<std::uint64_t>(tid); code < total;
           code += static_cast<std::uint64_t>(nthreads)) {
        for (int i = 1; i < mt; ++i) {
          sigma[static_cast<size_t>(i)] = (code >> (i - 1)) & 1ULL ? -1.0 : 1.0;
        }
        const PatternLp lp = solve_pattern(map, sigma);
        if (lp.feasible && lp.value > local) local = lp.value;
      }
      best[static_cast<size_t>(tid)] = local;
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  const double value = *std::max_element(best.begin(), best.end());
  if (value < 0.0) return {0.0, true};  // no feasible pattern: empty domain
  return {std::clamp(value, 0.0, 1.0), false};
}

}  // namespace

double compute_delta(const ParsevalFrame& f1, const ParsevalFrame& f2, const Vec& x1,
                     const Vec& x2, const SupportPair& s) {
  check_supports(f1, f2, s);
  const Vec c1 = f1.analyze(x1);
  const Vec c2 = f2.analyze(x2);
  std::vector<char> in1(static_cast<size_t>(f1.rows()), 0);
  std::vector<char> in2(static_cast<size_t>(f2.rows()), 0);
  for (int i : s.lambda1) in1[static_cast<size_t>(i)] = 1;
  for (int i : s.lambda2) in2[static_cast<size_t>(i)] = 1;
  double delta = 0.0;
  for (Eigen::Index i = 0; i < c1.size(); ++i) {
    if (!in1[static_cast<size_t>(i)]) delta += std::abs(c1[i]);
  }
  for (Eigen::Index i = 0; i < c2.size(); ++i) {
    if (!in2[static_cast<size_t>(i)]) delta += std::abs(c2[i]);
  }
  return delta;
}

IndexSet top_k_indices(const Vec& coeffs, int k) {
  const int m = static_cast<int>(coeffs.size());
  if (k < 0 || k > m) {
    throw std::invalid_argument("top_k_indices: k = " + std::to_string(k) +
                                " out of range [0, " + std::to_string(m) + "]");
  }
  std::vector<int> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(coeffs[a]);
    const double mb = std::abs(coeffs[b]);
    if (ma != mb) return ma > mb;
    return a < b;  // magnitude ties break toward the lower index
  });
  IndexSet out(order.begin(), order.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

SupportPair select_supports(const ParsevalFrame& f1, const ParsevalFrame& f2, const Vec& x1,
                            const Vec& x2, int k1, int k2) {
  return {top_k_indices(f1.analyze(x1), k1), top_k_indices(f2.analyze(x2), k2)};
}

double joint_ratio(const ParsevalFrame& f1, const ParsevalFrame& f2,
                   const CoordinatePartition& p, const SupportPair& s, const Vec& u,
                   const Vec& x) {
  check_pair_dims(f1, f2, p);
  check_supports(f1, f2, s);
  if (u.size() != p.dimension() || x.size() != p.dimension()) {
    throw std::invalid_argument("joint_ratio: signal length does not match partition");
  }
  for (int i : p.known()) {
    if (std::abs(u[i] - x[i]) > 1e-10) {
      throw std::invalid_argument("joint_ratio: infeasible pair, P_K u != P_K x at index " +
                                  std::to_string(i));
    }
  }
  const Vec c1 = f1.analyze(u);
  const Vec c2 = f2.analyze(x);
  std::vector<char> in1(static_cast<size_t>(f1.rows()), 0);
  std::vector<char> in2(static_cast<size_t>(f2.rows()), 0);
  for (int i : s.lambda1) in1[static_cast<size_t>(i)] = 1;
  for (int i : s.lambda2) in2[static_cast<size_t>(i)] = 1;
  double num = 0.0, rest = 0.0;
  for (Eigen::Index i = 0; i < c1.size(); ++i) {
    (in1[static_cast<size_t>(i)] ? num : rest) += std::abs(c1[i]);
  }
  for (Eigen::Index i = 0; i < c2.size(); ++i) {
    (in2[static_cast<size_t>(i)] ? num : rest) += std::abs(c2[i]);
  }
  const double denom = num + rest;
  if (denom <= 0.0) {
    throw std::invalid_argument("joint_ratio: zero denominator (both coefficient vectors vanish)");
  }
  return num / denom;
}

double kappa_exact(const ParsevalFrame& f1, const ParsevalFrame& f2,
                   const CoordinatePartition& p, const SupportPair& s,
                   const KappaOptions& opts) {
  return kappa_exact_impl(f1, f2, p, s, opts).value;
}

double kappa_lower_estimate(const ParsevalFrame& f1, const ParsevalFrame& f2,
                            const CoordinatePartition& p, const SupportPair& s, int samples,
                            std::uint64_t seed) {
  check_pair_dims(f1, f2, p);
  check_supports(f1, f2, s);
  if (samples < 1) throw std::invalid_argument("kappa_lower_estimate: samples must be >= 1");
  if (s.lambda1.empty() && s.lambda2.empty()) return 0.0;

  const FeasibleMap map = build_feasible_map(f1, f2, p, s);
  const int d = map.d;
  SplitMix64 rng(seed);

  Vec best_z = Vec::Zero(d);
  double best = -1.0;
  Vec z(d);
  for (int sample = 0; sample < samples; ++sample) {
    for (int j = 0; j < d; ++j) z[j] = rng.next_gaussian();
    const double value = coefficient_ratio(map.rows * z, map.on_support);
    if (value > best) {
      best = value;
      best_z = z;
    }
  }
  if (best < 0.0) {
    best_z.setZero();
    best_z[0] = 1.0;
    best = coefficient_ratio(map.rows * best_z, map.on_support);
    if (best < 0.0) return 0.0;
  }

  // Coordinate ascent with exact line maxima: along z + t*e_j both numerator
  // and denominator are piecewise linear in t, so on each breakpoint
  // interval the ratio is monotone; the line maximum sits on a breakpoint
  // or at the direction limit t -> +-inf, whose value is the ratio of e_j.
  Vec a = map.rows * best_z;
  const int mt = map.m1 + map.m2;
  for (int pass = 0; pass < 100; ++pass) {
    bool improved = false;
    for (int j = 0; j < d; ++j) {
      const Vec b = map.rows.col(j);
      double cand_best = best;
      double cand_t = 0.0;
      bool cand_dir = false;
      for (int i = 0; i < mt; ++i) {
        if (std::abs(b[i]) < 1e-14) continue;
        const double t = -a[i] / b[i];
        const double value = coefficient_ratio(a + t * b, map.on_support);
        if (value > cand_best + 1e-15) {
          cand_best = value;
          cand_t = t;
          cand_dir = false;
        }
      }
      const double dir_value = coefficient_ratio(b, map.on_support);
      if (dir_value > cand_best + 1e-15) {
        cand_best = dir_value;
        cand_dir = true;
      }
      if (cand_best > best + 1e-15) {
        if (cand_dir) {
          best_z.setZero();
          best_z[j] = 1.0;
          a = b;
        } else {
          best_z[j] += cand_t;
          a += cand_t * b;
        }
        best = cand_best;
        improved = true;
      }
    }
    if (!improved) break;
    const double scale = best_z.cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      best_z /= scale;
      a = map.rows * best_z;
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

double error_bound(double delta, double kappa) {
  if (delta < 0.0 || !(kappa >= 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("error_bound: need delta >= 0 and kappa in [0, 1]");
  }
  if (kappa >= 0.5) return std::numeric_limits<double>::infinity();
  return 2.0 * delta / (1.0 - 2.0 * kappa);
}

Certificate certify(const ParsevalFrame& f1, const ParsevalFrame& f2,
                    const CoordinatePartition& p, const SupportPair& s, const Vec& x1,
                    const Vec& x2, const CertifyOptions& opts) {
  Certificate cert;
  cert.delta = compute_delta(f1, f2, x1, x2, s);
  if (opts.exact) {
    const KappaExactResult res = kappa_exact_impl(f1, f2, p, s, opts.kappa);
    cert.kappa = res.value;
    cert.degenerate = res.degenerate;
    cert.kappa_kind = KappaKind::exact;
    cert.bound = error_bound(cert.delta, cert.kappa);
  } else {
    cert.kappa = kappa_lower_estimate(f1, f2, p, s, opts.samples, opts.seed);
    cert.kappa_kind = KappaKind::lower_bound;
    cert.bound = std::numeric_limits<double>::infinity();
  }
  return cert;
}

}  // namespace geosep
