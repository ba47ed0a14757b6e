#include "geosep/certificates.hpp"
#include "geosep/harness.hpp"
#include "geosep/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace geosep;

namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec x(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) x[i++] = v;
  return x;
}

IndexSet all_indices(int m) {
  IndexSet out(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) out[static_cast<size_t>(i)] = i;
  return out;
}

// Direct ratio evaluation used as the grid oracle; independent of the
// library's joint_ratio and of the sign-pattern LPs.
double raw_ratio(const Mat& rows, const std::vector<char>& on, const Vec& z) {
  const Vec a = rows * z;
  double num = 0.0, denom = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double v = std::abs(a[i]);
    denom += v;
    if (on[static_cast<size_t>(i)]) num += v;
  }
  return denom > 0 ? num / denom : 0.0;
}

}  // namespace

TEST_CASE("compute_delta on identity frames") {
  const auto f = identity_frame(2);
  const Vec x1 = make_vec({1, 0});
  const Vec x2 = make_vec({0, 2});
  CHECK(compute_delta(f, f, x1, x2, {{0}, {1}}) == 0.0);
  CHECK(compute_delta(f, f, x1, x2, {{}, {}}) == doctest::Approx(3).epsilon(1e-14));
}

TEST_CASE("compute_delta against the hand-evaluated DCT-II column") {
  const auto f1 = dct_frame(4);
  const auto f2 = identity_frame(4);
  const Vec e0 = make_vec({1, 0, 0, 0});
  const Vec zero = Vec::Zero(4);

  // Coefficients of e0 re-derived from the closed form, not the frame.
  std::vector<double> coeff(4);
  for (int k = 0; k < 4; ++k) {
    const double ck = k == 0 ? std::sqrt(0.25) : std::sqrt(0.5);
    coeff[static_cast<size_t>(k)] = ck * std::cos(std::numbers::pi * k / 8.0);
  }
  int argmax = 0;
  for (int k = 1; k < 4; ++k) {
    if (std::abs(coeff[static_cast<size_t>(k)]) > std::abs(coeff[static_cast<size_t>(argmax)])) {
      argmax = k;
    }
  }
  double expected = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (k != argmax) expected += std::abs(coeff[static_cast<size_t>(k)]);
  }

  CHECK(argmax == 1);
  const auto supports = select_supports(f1, f2, e0, zero, 1, 0);
  CHECK(supports.lambda1 == IndexSet{1});
  CHECK(compute_delta(f1, f2, e0, zero, supports) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("compute_delta with full supports vanishes") {
  const auto f1 = dct_frame(5);
  const auto f2 = random_tight_frame(7, 5, 2);
  SplitMix64 rng(5);
  Vec x1(5), x2(5);
  for (int i = 0; i < 5; ++i) {
    x1[i] = rng.next_gaussian();
    x2[i] = rng.next_gaussian();
  }
  CHECK(compute_delta(f1, f2, x1, x2, {all_indices(5), all_indices(7)}) == 0.0);
  CHECK_THROWS_AS(compute_delta(f1, f2, x1, x2, {{5}, {}}), std::invalid_argument);
}

TEST_CASE("select_supports picks largest magnitudes, ties to lower index") {
  const auto f = identity_frame(3);
  const Vec zero3 = Vec::Zero(3);
  const auto s = select_supports(f, f, make_vec({3, -5, 0}), zero3, 1, 0);
  CHECK(s.lambda1 == IndexSet{1});
  CHECK(s.lambda2.empty());

  const auto f2 = identity_frame(2);
  const Vec zero2 = Vec::Zero(2);
  const auto tie = select_supports(f2, f2, make_vec({2, 2}), zero2, 1, 0);
  CHECK(tie.lambda1 == IndexSet{0});

  CHECK_THROWS_AS(select_supports(f2, f2, zero2, zero2, 3, 0), std::invalid_argument);
}

TEST_CASE("joint_ratio endpoints and the scalar instance") {
  const auto f1 = identity_frame(2);
  const auto f2 = dct_frame(2);
  const auto p = make_partition(2, {0, 1});
  const Vec u = make_vec({1, -2});
  const SupportPair full{all_indices(2), all_indices(2)};
  CHECK(joint_ratio(f1, f2, p, full, u, u) == doctest::Approx(1).epsilon(1e-14));
  CHECK(joint_ratio(f1, f2, p, {{}, {}}, u, u) == 0.0);

  const auto f = identity_frame(1);
  const auto p1 = make_partition(1, {0});
  const Vec one = make_vec({1});
  CHECK(joint_ratio(f, f, p1, {{0}, {}}, one, one) == doctest::Approx(0.5).epsilon(1e-14));

  // Infeasible pair: P_K u != P_K x.
  CHECK_THROWS_AS(joint_ratio(f1, f2, p, full, make_vec({1, 0}), make_vec({0, 0})),
                  std::invalid_argument);
  const Vec zero = Vec::Zero(2);
  CHECK_THROWS_AS(joint_ratio(f1, f2, p, full, zero, zero), std::invalid_argument);
}

TEST_CASE("joint_ratio is scale invariant and within [0,1]") {
  const auto f1 = dct_frame(3);
  const auto f2 = haar_frame(4);
  // mismatched frames vs partition
  CHECK_THROWS_AS(joint_ratio(f1, f2, make_partition(3, {0}), {{}, {}}, Vec::Zero(3),
                              Vec::Zero(3)),
                  std::invalid_argument);

  const auto g1 = identity_frame(4);
  const auto g2 = haar_frame(4);
  const auto p = make_partition(4, {0, 3});
  const SupportPair s{{1, 2}, {0}};
  SplitMix64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    Vec x(4), u(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = rng.next_gaussian();
      u[i] = rng.next_gaussian();
    }
    for (int i : p.known()) u[i] = x[i];  // make the pair feasible
    const double r = joint_ratio(g1, g2, p, s, u, x);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    const double alpha = trial % 2 ? 3.5 : -0.25;
    CHECK(joint_ratio(g1, g2, p, s, alpha * u, alpha * x) == doctest::Approx(r).epsilon(1e-10));
  }
}

TEST_CASE("kappa_exact endpoints") {
  const auto f1 = identity_frame(3);
  const auto f2 = dct_frame(3);
  const auto p = make_partition(3, {0, 2});
  CHECK(kappa_exact(f1, f2, p, {{}, {}}) == 0.0);
  CHECK(kappa_exact(f1, f2, p, {all_indices(3), all_indices(3)}) == 1.0);
}

TEST_CASE("kappa_exact on the scalar instance") {
  const auto f = identity_frame(1);
  const auto p = make_partition(1, {0});
  CHECK(kappa_exact(f, f, p, {{0}, {}}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kappa_exact is 1 when a support atom lives on a missing coordinate") {
  const auto f = identity_frame(1);
  const auto p = make_partition(1, {});
  CHECK(kappa_exact(f, f, p, {{0}, {}}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kappa_exact agrees with a dense direction grid in 2D") {
  struct Case {
    ParsevalFrame f1;
    ParsevalFrame f2;
    CoordinatePartition p;
    SupportPair s;
  };
  std::vector<Case> cases;
  cases.push_back({identity_frame(2), dct_frame(2), make_partition(2, {0, 1}), {{0}, {1}}});
  cases.push_back({identity_frame(2), haar_frame(2), make_partition(2, {0, 1}), {{1}, {0}}});
  cases.push_back({dct_frame(2), dct_frame(2), make_partition(2, {0, 1}), {{0}, {}}});
  cases.push_back({identity_frame(1), identity_frame(1), make_partition(1, {}), {{0}, {}}});

  for (const auto& cs : cases) {
    CAPTURE(cs.f1.label());
    CAPTURE(cs.f2.label());
    const int m1 = cs.f1.rows();
    const int m2 = cs.f2.rows();
    const int nk = static_cast<int>(cs.p.known().size());
    const int nm = static_cast<int>(cs.p.missing().size());
    REQUIRE(nk + 2 * nm == 2);  // the grid below scans a 2D subspace

    // Build the stacked coefficient map of the feasible subspace by hand.
    Mat rows = Mat::Zero(m1 + m2, 2);
    int col = 0;
    for (int i : cs.p.known()) {
      rows.col(col).head(m1) = cs.f1.analysis().col(i);
      rows.col(col).tail(m2) = cs.f2.analysis().col(i);
      ++col;
    }
    for (int i : cs.p.missing()) {
      rows.col(col).head(m1) = cs.f1.analysis().col(i);
      ++col;
    }
    for (int i : cs.p.missing()) {
      rows.col(col).tail(m2) = cs.f2.analysis().col(i);
      ++col;
    }
    std::vector<char> on(static_cast<size_t>(m1 + m2), 0);
    for (int i : cs.s.lambda1) on[static_cast<size_t>(i)] = 1;
    for (int i : cs.s.lambda2) on[static_cast<size_t>(m1 + i)] = 1;

    double grid_max = 0.0;
    const int steps = 20000;
    for (int k = 0; k < steps; ++k) {
      const double theta = std::numbers::pi * k / steps;
      const Vec z = make_vec({std::cos(theta), std::sin(theta)});
      grid_max = std::max(grid_max, raw_ratio(rows, on, z));
    }

    const double exact = kappa_exact(cs.f1, cs.f2, cs.p, cs.s);
    CHECK(exact >= grid_max - 1e-9);
    CHECK(exact <= grid_max + 2e-3);
  }
}

TEST_CASE("kappa_exact agrees with a spherical grid in 3D") {
  struct Case {
    ParsevalFrame f1;
    ParsevalFrame f2;
    CoordinatePartition p;
    SupportPair s;
    double expected;  // closed-form suprema, frozen
  };
  std::vector<Case> cases;
  cases.push_back({identity_frame(2), dct_frame(2), make_partition(2, {0}), {{0}, {}},
                   std::numbers::sqrt2 - 1.0});
  cases.push_back({identity_frame(2), haar_frame(2), make_partition(2, {1}), {{}, {0}},
                   2.0 - std::numbers::sqrt2});
  cases.push_back({dct_frame(2), dct_frame(2), make_partition(2, {0}), {{}, {1}}, 0.5});

  for (const auto& cs : cases) {
    CAPTURE(cs.f1.label());
    CAPTURE(cs.f2.label());
    const int m1 = cs.f1.rows();
    const int m2 = cs.f2.rows();
    REQUIRE(static_cast<int>(cs.p.known().size() + 2 * cs.p.missing().size()) == 3);

    Mat rows = Mat::Zero(m1 + m2, 3);
    int col = 0;
    for (int i : cs.p.known()) {
      rows.col(col).head(m1) = cs.f1.analysis().col(i);
      rows.col(col).tail(m2) = cs.f2.analysis().col(i);
      ++col;
    }
    for (int i : cs.p.missing()) {
      rows.col(col).head(m1) = cs.f1.analysis().col(i);
      ++col;
    }
    for (int i : cs.p.missing()) {
      rows.col(col).tail(m2) = cs.f2.analysis().col(i);
      ++col;
    }
    std::vector<char> on(static_cast<size_t>(m1 + m2), 0);
    for (int i : cs.s.lambda1) on[static_cast<size_t>(i)] = 1;
    for (int i : cs.s.lambda2) on[static_cast<size_t>(m1 + i)] = 1;

    double grid_max = 0.0;
    const int n_theta = 200, n_phi = 400;
    for (int a = 0; a <= n_theta; ++a) {
      const double theta = std::numbers::pi * a / n_theta;
      for (int b = 0; b < n_phi; ++b) {
        const double phi = 2.0 * std::numbers::pi * b / n_phi;
        Vec z(3);
        z << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta);
        grid_max = std::max(grid_max, raw_ratio(rows, on, z));
      }
    }

    const double exact = kappa_exact(cs.f1, cs.f2, cs.p, cs.s);
    CHECK(exact == doctest::Approx(cs.expected).epsilon(1e-10));
    CHECK(exact >= grid_max - 1e-9);
    CHECK(exact <= grid_max + 2e-3);
  }
}

TEST_CASE("kappa pattern LPs survive heavy degeneracy") {
  // These haar+dct cells cycled the simplex before exact Bland ties and
  // rhs snapping; values frozen from the fixed oracle.
  InstanceSpec spec;
  spec.phi1 = "haar:n=8";
  spec.phi2 = "dct:n=8";
  spec.n = 8;
  spec.k1 = 1;
  spec.k2 = 2;
  spec.mask = {MaskRule::Kind::block, 0.0, 2, 5};
  spec.supports.kind = SupportRule::Kind::exact;

  const Instance five = gen_instance(spec, 5);
  const double kappa5 = kappa_exact(five.f1, five.f2, five.partition, five.supports);
  CHECK(kappa5 == doctest::Approx(0.61959521591844258).epsilon(1e-9));

  const Instance seven = gen_instance(spec, 7);
  const double kappa7 = kappa_exact(seven.f1, seven.f2, seven.partition, seven.supports);
  CHECK(kappa7 == doctest::Approx(0.79777635715943518).epsilon(1e-9));

  CHECK(kappa_lower_estimate(five.f1, five.f2, five.partition, five.supports, 500, 11) <=
        kappa5 + 1e-9);
}

TEST_CASE("kappa_exact refuses above the cutoff") {
  const auto f1 = dct_frame(10);
  const auto f2 = identity_frame(10);
  const auto p = make_partition(10, {0, 1, 2});
  CHECK_THROWS_AS(kappa_exact(f1, f2, p, {{0}, {1}}), CutoffExceeded);

  const auto g1 = dct_frame(6);
  const auto g2 = identity_frame(6);
  const auto q = make_partition(6, {0, 1, 2});
  KappaOptions tight;
  tight.cutoff = 10;
  CHECK_THROWS_AS(kappa_exact(g1, g2, q, {{0}, {1}}, tight), CutoffExceeded);
  tight.cutoff = 12;
  CHECK_NOTHROW(kappa_exact(g1, g2, q, {{0}, {1}}, tight));
}

TEST_CASE("kappa lower estimate never exceeds the oracle") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + rng.next_below(3);  // m1+m2 <= 10
    const auto f1 = identity_frame(n);
    const auto f2 = dct_frame(n);
    IndexSet known;
    for (int i = 0; i < n; ++i) {
      if (rng.next() & 1ULL) known.push_back(i);
    }
    const auto p = make_partition(n, known);
    SupportPair s;
    for (int i = 0; i < n; ++i) {
      if (rng.next_below(3) == 0) s.lambda1.push_back(i);
      if (rng.next_below(3) == 0) s.lambda2.push_back(i);
    }
    const double exact = kappa_exact(f1, f2, p, s);
    const double estimate = kappa_lower_estimate(f1, f2, p, s, 200, 1000 + trial);
    CHECK(estimate <= exact + 1e-9);
    // The refined estimate should not be wildly loose either.
    CHECK(estimate >= 0.0);
  }
}

TEST_CASE("kappa lower estimate nails the scalar instance") {
  const auto f = identity_frame(1);
  const auto p = make_partition(1, {0});
  for (std::uint64_t seed : {1ULL, 7ULL, 42ULL}) {
    CHECK(kappa_lower_estimate(f, f, p, {{0}, {}}, 100, seed) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(kappa_lower_estimate(f, f, p, {{}, {}}, 10, 1) == 0.0);
  CHECK_THROWS_AS(kappa_lower_estimate(f, f, p, {{0}, {}}, 0, 1), std::invalid_argument);
}

TEST_CASE("support monotonicity of kappa and delta") {
  const auto f1 = identity_frame(3);
  const auto f2 = dct_frame(3);
  const auto p = make_partition(3, {0, 1});
  SplitMix64 rng(31);
  Vec x1(3), x2(3);
  for (int i = 0; i < 3; ++i) {
    x1[i] = rng.next_gaussian();
    x2[i] = rng.next_gaussian();
  }
  // Nested chains: add one index at a time.
  SupportPair small{{}, {}};
  double prev_kappa = 0.0;
  double prev_delta = compute_delta(f1, f2, x1, x2, small);
  for (int k = 1; k <= 3; ++k) {
    SupportPair grown = select_supports(f1, f2, x1, x2, k, k);
    const double kappa = kappa_exact(f1, f2, p, grown);
    const double delta = compute_delta(f1, f2, x1, x2, grown);
    CHECK(prev_kappa <= kappa + 1e-9);
    CHECK(prev_delta >= delta - 1e-12);
    prev_kappa = kappa;
    prev_delta = delta;
  }
  CHECK(prev_kappa == 1.0);
  CHECK(prev_delta == 0.0);
}

TEST_CASE("sampled ratios never beat the oracle") {
  const auto f1 = identity_frame(3);
  const auto f2 = haar_frame(4);
  CHECK_THROWS_AS(kappa_exact(f1, f2, make_partition(3, {0}), {{}, {}}),
                  std::invalid_argument);

  const auto g2 = haar_frame(2);
  const auto g1 = identity_frame(2);
  const auto p = make_partition(2, {1});
  const SupportPair s{{0}, {1}};
  const double exact = kappa_exact(g1, g2, p, s);
  SplitMix64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Vec x(2), u(2);
    for (int i = 0; i < 2; ++i) {
      x[i] = rng.next_gaussian();
      u[i] = rng.next_gaussian();
    }
    for (int i : p.known()) u[i] = x[i];
    CHECK(joint_ratio(g1, g2, p, s, u, x) <= exact + 1e-9);
  }
}

TEST_CASE("error_bound formula and vacuous regime") {
  CHECK(error_bound(0, 0) == 0.0);
  CHECK(error_bound(1, 0.25) == doctest::Approx(4).epsilon(1e-14));
  CHECK(std::isinf(error_bound(0.3, 0.5)));
  CHECK(std::isinf(error_bound(0.0, 0.75)));
  CHECK_THROWS_AS(error_bound(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(0, 1.5), std::invalid_argument);
}

TEST_CASE("certify bundles delta, kappa and bound") {
  const auto f = identity_frame(2);
  const auto p = make_partition(2, {0, 1});
  const Vec x1 = make_vec({1, 0});
  const Vec x2 = make_vec({0, 2});

  const Certificate empty = certify(f, f, p, {{}, {}}, x1, x2);
  CHECK(empty.kappa == 0.0);
  CHECK(empty.kappa_kind == KappaKind::exact);
  CHECK(empty.bound == doctest::Approx(2 * empty.delta).epsilon(1e-12));
  CHECK(empty.certified());

  const Certificate full = certify(f, f, p, {{0, 1}, {0, 1}}, x1, x2);
  CHECK(full.kappa == 1.0);
  CHECK(std::isinf(full.bound));
  CHECK_FALSE(full.certified());

  CertifyOptions opts;
  opts.exact = false;
  opts.samples = 50;
  const Certificate lb = certify(f, f, p, {{0}, {}}, x1, x2, opts);
  CHECK(lb.kappa_kind == KappaKind::lower_bound);
  CHECK_FALSE(lb.certified());
}
