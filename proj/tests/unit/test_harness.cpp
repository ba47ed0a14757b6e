#include "geosep/harness.hpp"
#include "geosep/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace geosep;

namespace {

InstanceSpec delta0_spec() {
  InstanceSpec spec;
  spec.phi1 = "identity:n=6";
  spec.phi2 = "dct:n=6";
  spec.n = 6;
  spec.k1 = 1;
  spec.k2 = 1;
  spec.mask.kind = MaskRule::Kind::block;
  spec.mask.a = 2;
  spec.mask.b = 4;
  spec.supports.kind = SupportRule::Kind::exact;
  return spec;
}

// Strips the trailing wall_ms column from every CSV line.
std::string strip_wall_ms(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const size_t comma = line.rfind(',');
    out << line.substr(0, comma) << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("gen_instance builds a delta-free instance from orthonormal frames") {
  const Instance inst = gen_instance(delta0_spec(), 5);
  CHECK(inst.x0 == inst.x1_true + inst.x2_true);
  CHECK(inst.partition.missing() == IndexSet{2, 3});
  CHECK(compute_delta(inst.f1, inst.f2, inst.x1_true, inst.x2_true, inst.supports) <= 1e-12);
  CHECK(inst.supports.lambda1.size() == 1);
  CHECK(inst.supports.lambda2.size() == 1);

  const Instance again = gen_instance(delta0_spec(), 5);
  CHECK(inst.x0 == again.x0);  // determinism, bit for bit
  CHECK(inst.supports.lambda1 == again.supports.lambda1);

  const Instance other = gen_instance(delta0_spec(), 6);
  CHECK(inst.x0 != other.x0);
}

TEST_CASE("gen_instance n=8 identity+dct with a missing block stays delta-free") {
  InstanceSpec spec;
  spec.phi1 = "identity:n=8";
  spec.phi2 = "dct:n=8";
  spec.n = 8;
  spec.k1 = 1;
  spec.k2 = 1;
  spec.mask = {MaskRule::Kind::block, 0.0, 2, 4};
  spec.supports.kind = SupportRule::Kind::exact;
  const Instance inst = gen_instance(spec, 2);
  CHECK(inst.partition.missing() == IndexSet{2, 3});
  CHECK(compute_delta(inst.f1, inst.f2, inst.x1_true, inst.x2_true, inst.supports) <= 1e-12);
}

TEST_CASE("gen_instance with a redundant frame and topk supports has positive delta") {
  InstanceSpec spec;
  spec.phi1 = "random:m=6,n=4,seed=9";
  spec.phi2 = "identity:n=4";
  spec.n = 4;
  spec.k1 = 2;
  spec.k2 = 1;
  spec.mask.kind = MaskRule::Kind::block;
  spec.supports.kind = SupportRule::Kind::topk;
  const Instance inst = gen_instance(spec, 3);
  const double delta =
      compute_delta(inst.f1, inst.f2, inst.x1_true, inst.x2_true, inst.supports);
  CHECK(delta > 1e-6);  // redundant analysis is not exactly sparse
  CHECK(inst.supports.lambda1.size() == 2);
}

TEST_CASE("gen_instance rejects inconsistent specs") {
  InstanceSpec spec = delta0_spec();
  spec.k1 = 99;
  CHECK_THROWS_AS(gen_instance(spec, 1), std::invalid_argument);

  InstanceSpec bad_block = delta0_spec();
  bad_block.mask.b = 100;
  CHECK_THROWS_AS(gen_instance(bad_block, 1), std::invalid_argument);

  InstanceSpec wrong_n = delta0_spec();
  wrong_n.n = 16;
  CHECK_THROWS_AS(gen_instance(wrong_n, 1), std::invalid_argument);
}

TEST_CASE("verify_recovery_bound on an exactly recoverable instance") {
  const Instance inst = gen_instance(delta0_spec(), 11);
  const auto result = solve_lp_exact(inst.f1, inst.f2, inst.partition, inst.x0);
  const Certificate cert =
      certify(inst.f1, inst.f2, inst.partition, inst.supports, inst.x1_true, inst.x2_true);
  REQUIRE(cert.kappa_kind == KappaKind::exact);
  const BoundCheck check = verify_recovery_bound(inst, result, cert);
  REQUIRE(check.part2_holds.has_value());
  CHECK(*check.part2_holds);
  if (cert.certified()) {
    REQUIRE(check.bound_holds.has_value());
    CHECK(*check.bound_holds);
    CHECK(check.error <= cert.bound + 1e-6);
    CHECK(check.error <= 1e-6);  // delta = 0: exact recovery
  }
  if (check.intermezzo_holds.has_value()) CHECK(*check.intermezzo_holds);
}

TEST_CASE("verify_recovery_bound refuses to assert the bound without an exact certificate") {
  const Instance inst = gen_instance(delta0_spec(), 11);
  const auto result = solve_lp_exact(inst.f1, inst.f2, inst.partition, inst.x0);
  Certificate cert =
      certify(inst.f1, inst.f2, inst.partition, inst.supports, inst.x1_true, inst.x2_true);
  cert.kappa_kind = KappaKind::lower_bound;
  const BoundCheck check = verify_recovery_bound(inst, result, cert);
  CHECK_FALSE(check.bound_holds.has_value());
  CHECK_FALSE(check.intermezzo_holds.has_value());

  // An iterative minimizer cannot be used to assert the bound either.
  const Certificate exact_cert =
      certify(inst.f1, inst.f2, inst.partition, inst.supports, inst.x1_true, inst.x2_true);
  const auto iter = solve_iterative(inst.f1, inst.f2, inst.partition, inst.x0);
  const BoundCheck iter_check = verify_recovery_bound(inst, iter, exact_cert);
  CHECK_FALSE(iter_check.bound_holds.has_value());
  CHECK_FALSE(iter_check.part2_holds.has_value());
}

TEST_CASE("run_experiment produces one row per seed and an empty report for no seeds") {
  ExperimentConfig config;
  config.spec = delta0_spec();
  config.seeds = {};
  CHECK(run_experiment(config).empty());

  config.seeds = {1, 2, 3};
  const auto rows = run_experiment(config);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CAPTURE(row.id);
    CHECK(row.failure.empty());
    CHECK(row.n == 6);
    CHECK(row.m1 == 6);
    CHECK(row.m2 == 6);
    CHECK(row.kappa_kind == "exact");
    REQUIRE(row.delta.has_value());
    CHECK(*row.delta <= 1e-12);
    REQUIRE(row.objective_lp.has_value());
    REQUIRE(row.objective_iter.has_value());
    CHECK(std::abs(*row.objective_lp - *row.objective_iter) <= 1e-6 * (1 + *row.objective_lp));
    REQUIRE(row.part2_holds.has_value());
    CHECK(*row.part2_holds);
  }
  CHECK(all_certified_rows_pass(rows));
}

TEST_CASE("run_experiment marks cells above the kappa cutoff as lower bounds") {
  ExperimentConfig config;
  config.spec = delta0_spec();
  config.seeds = {4};
  config.kappa_cutoff = 10;  // m1 + m2 = 12 exceeds this
  config.kappa_samples = 50;
  const auto rows = run_experiment(config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].kappa_kind == "lower_bound");
  CHECK(rows[0].bound == "uncertified");
  CHECK_FALSE(rows[0].bound_holds.has_value());
}

TEST_CASE("run_experiment records per-cell failures without aborting") {
  ExperimentConfig config;
  config.spec = delta0_spec();
  config.spec.k1 = 99;  // every cell fails to generate
  config.seeds = {1, 2};
  const auto rows = run_experiment(config);
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].failure.empty());
  CHECK(!rows[1].failure.empty());
  CHECK_FALSE(all_certified_rows_pass(rows));
}

TEST_CASE("write_report emits stable CSV and parseable JSONL") {
  ExperimentConfig config;
  config.spec = delta0_spec();
  config.seeds = {1, 2, 3};
  const auto rows = run_experiment(config);

  std::ostringstream csv;
  write_report(rows, csv, ReportFormat::csv);
  const std::string text = csv.str();
  CHECK(text.rfind("id,n,n_known,m1,m2,n_lambda1,n_lambda2,delta,kappa,kappa_kind,bound,"
                   "objective_lp,objective_iter,error,bound_holds,intermezzo_holds,"
                   "part2_holds,iterations,wall_ms\n",
                   0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + 3 rows

  std::ostringstream jsonl;
  write_report(rows, jsonl, ReportFormat::jsonl);
  std::istringstream lines(jsonl.str());
  std::string line;
  int parsed = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("kappa"));
    CHECK(j.contains("bound"));
    ++parsed;
  }
  CHECK(parsed == 3);
}

TEST_CASE("reports are deterministic modulo wall_ms") {
  ExperimentConfig config;
  config.spec = delta0_spec();
  config.seeds = {7, 8};
  std::ostringstream a, b;
  write_report(run_experiment(config), a, ReportFormat::csv);
  write_report(run_experiment(config), b, ReportFormat::csv);
  CHECK(strip_wall_ms(a.str()) == strip_wall_ms(b.str()));
}

TEST_CASE("infinite bounds serialize as inf") {
  InstanceSpec spec = delta0_spec();
  // Full supports force kappa = 1 and an infinite bound.
  spec.supports.kind = SupportRule::Kind::topk;
  spec.supports.k1 = 6;
  spec.supports.k2 = 6;
  ExperimentConfig config;
  config.spec = spec;
  config.seeds = {1};
  const auto rows = run_experiment(config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].failure.empty());
  CHECK(rows[0].bound == "inf");
  REQUIRE(rows[0].kappa.has_value());
  CHECK(*rows[0].kappa == 1.0);
  CHECK_FALSE(rows[0].bound_holds.has_value());

  std::ostringstream csv;
  write_report(rows, csv, ReportFormat::csv);
  CHECK(csv.str().find(",inf,") != std::string::npos);
}
