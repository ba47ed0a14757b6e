#pragma once

#include "geosep/certificates.hpp"
#include "geosep/frame.hpp"
#include "geosep/partition.hpp"
#include "geosep/solver.hpp"
#include "geosep/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace geosep {

struct MaskRule {
  enum class Kind { random, block };
  Kind kind = Kind::block;
  double p = 0.0;  // random: per-coordinate missing probability
  int a = 0;       // block: missing coordinates [a, b)
  int b = 0;
};

struct SupportRule {
  enum class Kind { exact, topk };
  Kind kind = Kind::exact;
  // topk sizes; -1 means "use the generation sparsity of that component".
  int k1 = -1;
  int k2 = -1;
};

struct InstanceSpec {
  std::string phi1 = "identity:n=4";
  std::string phi2 = "identity:n=4";
  int n = 4;
  int k1 = 1;  // atoms in component 1
  int k2 = 1;  // atoms in component 2
  MaskRule mask;
  SupportRule supports;
};

// A fully materialized problem: ground-truth components, their sum, the
// known/missing split, and the chosen supports.
struct Instance {
  ParsevalFrame f1;
  ParsevalFrame f2;
  CoordinatePartition partition;
  Vec x1_true;
  Vec x2_true;
  Vec x0;  // x1_true + x2_true, exactly
  SupportPair supports;
  std::uint64_t seed = 0;
};

// Deterministic per seed. Components are k-atom synthesis signals with
// magnitudes in [1, 2); with orthonormal frames and the `exact` support
// rule the instance has delta <= 1e-12 by construction.
Instance gen_instance(const InstanceSpec& spec, std::uint64_t seed);

// Inpainting vignette: spikes (identity frame) + one sinusoid (DCT atom)
// with the block [block_a, block_b) missing. Spikes land on known
// coordinates: a spike inside the gap is invisible to the constraint and
// to the DCT side, hence unrecoverable. delta = 0 by construction.
Instance spikes_and_sinusoid_instance(int n, int block_a, int block_b, int n_spikes,
                                      std::uint64_t seed);

struct BoundCheck {
  double error = 0.0;  // ||x1*-x1_0||_2 + ||x2*-x2_0||_2
  Certificate certificate;
  // Defined only for an exact kappa < 1/2 and an lp_exact minimizer.
  std::optional<bool> bound_holds;
  // Defined for exact kappa < 1 (the 1/(1-kappa) factor must be usable).
  std::optional<bool> intermezzo_holds;
  // Needs minimality, so it is asserted only against lp_exact results; an
  // inexact iterative minimizer must not fake a guarantee violation.
  std::optional<bool> part2_holds;
};

// Checks the recovery bound error <= 2*delta/(1-2*kappa) plus the two
// inequalities of its derivation, each with slack tolerance 1e-6.
BoundCheck verify_recovery_bound(const Instance& inst, const SolveResult& result,
                          const Certificate& cert);

struct ReportRow {
  std::string id;
  int n = 0;
  int n_known = 0;
  int m1 = 0;
  int m2 = 0;
  int n_lambda1 = 0;
  int n_lambda2 = 0;
  std::optional<double> delta;
  std::optional<double> kappa;
  std::string kappa_kind;  // "exact" | "lower_bound" | "" on cell failure
  // "inf", a number, or "uncertified" (kappa only known as a lower bound).
  std::string bound;
  std::optional<double> objective_lp;
  std::optional<double> objective_iter;
  std::optional<double> error;
  std::optional<bool> bound_holds;
  std::optional<bool> intermezzo_holds;
  std::optional<bool> part2_holds;
  std::optional<int> iterations;
  double wall_ms = 0.0;
  std::string failure;  // diagnostic for failed cells; empty otherwise
};

struct ExperimentConfig {
  InstanceSpec spec;
  std::vector<std::uint64_t> seeds;
  SolveOptions solver;
  int kappa_cutoff = kDefaultKappaCutoff;
  int kappa_samples = 1000;
};

// One row per seed: generate, solve (both methods when size permits),
// certify, verify. Cell failures are recorded in the row and never abort
// the sweep.
std::vector<ReportRow> run_experiment(const ExperimentConfig& config);

enum class ReportFormat { csv, jsonl };

void write_report(const std::vector<ReportRow>& rows, std::ostream& out,
                  ReportFormat format);
void write_report(const std::vector<ReportRow>& rows, const std::string& path,
                  ReportFormat format);

// All certified rows pass all three checks; vacuously true when no row is
// certified.
bool all_certified_rows_pass(const std::vector<ReportRow>& rows);

}  // namespace geosep
