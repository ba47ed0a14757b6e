// geosep: solve, certify and verify joint data completion + separation
// problems from the command line. Subcommands: solve, certify,
// verify-bound, bench, demo.

#include "geosep/certificates.hpp"
#include "geosep/frame.hpp"
#include "geosep/harness.hpp"
#include "geosep/io.hpp"
#include "geosep/partition.hpp"
#include "geosep/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;
using namespace geosep;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitKappaCutoff = 3;

constexpr const char* kFrameSpecHelp =
    "frame spec: identity:n=64 | dct:n=64 | haar:n=64 | "
    "random:m=96,n=64,seed=7 | union:dct+identity:n=64 | csv:PATH";
constexpr const char* kKnownSpecHelp =
    "known set: all | none | list:0,3,5 | block:a,b | random:p,seed";

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << std::endl;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
  out << j.dump(2) << '\n';
}

void write_trace(const std::vector<double>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file '" + path + "'");
  out << "iteration,residual\n";
  for (size_t i = 0; i < trace.size(); ++i) {
    out << (i + 1) << ',' << format_double(trace[i]) << '\n';
  }
}

struct SolveArgs {
  std::string phi1, phi2, known, signal_path, method = "iterative", out, trace;
  double tol = 1e-9;
  int max_iters = 100000;
};

int cmd_solve(const SolveArgs& args) {
  const Vec x0 = read_signal(args.signal_path);
  const int n = static_cast<int>(x0.size());
  const ParsevalFrame f1 = parse_frame_spec(args.phi1);
  const ParsevalFrame f2 = parse_frame_spec(args.phi2);
  const CoordinatePartition p(n, parse_known_spec(args.known, n));

  SolveResult result;
  if (args.method == "lp") {
    result = solve_lp_exact(f1, f2, p, x0);
  } else if (args.method == "iterative") {
    SolveOptions opts;
    opts.tol = args.tol;
    opts.max_iters = args.max_iters;
    opts.record_trace = !args.trace.empty();
    result = solve_iterative(f1, f2, p, x0, opts);
    if (!args.trace.empty()) write_trace(result.residual_trace, args.trace);
  } else {
    throw std::invalid_argument("unknown method '" + args.method + "' (iterative|lp)");
  }
  emit(solve_result_to_json(result), args.out);
  return result.converged ? kExitOk : kExitNotConverged;
}

struct CertifyArgs {
  std::string phi1, phi2, known, x1_path, x2_path, supports_path, topk, kappa = "exact", out;
  int samples = 1000;
  std::uint64_t seed = 1;
  int cutoff = kDefaultKappaCutoff;
};

int cmd_certify(const CertifyArgs& args) {
  const Vec x1 = read_signal(args.x1_path);
  const Vec x2 = read_signal(args.x2_path);
  if (x1.size() != x2.size()) {
    throw std::invalid_argument("component signals have different lengths");
  }
  const int n = static_cast<int>(x1.size());
  const ParsevalFrame f1 = parse_frame_spec(args.phi1);
  const ParsevalFrame f2 = parse_frame_spec(args.phi2);
  const CoordinatePartition p(n, parse_known_spec(args.known, n));

  SupportPair supports;
  if (!args.supports_path.empty()) {
    supports = read_supports(args.supports_path);
  } else if (!args.topk.empty()) {
    const size_t comma = args.topk.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("--topk expects k1,k2");
    }
    const int k1 = std::stoi(args.topk.substr(0, comma));
    const int k2 = std::stoi(args.topk.substr(comma + 1));
    supports = select_supports(f1, f2, x1, x2, k1, k2);
  } else {
    throw std::invalid_argument("one of --supports or --topk is required");
  }

  CertifyOptions opts;
  opts.exact = args.kappa == "exact";
  if (!opts.exact && args.kappa != "estimate") {
    throw std::invalid_argument("unknown kappa mode '" + args.kappa + "' (exact|estimate)");
  }
  opts.samples = args.samples;
  opts.seed = args.seed;
  opts.kappa.cutoff = args.cutoff;

  Certificate cert;
  try {
    cert = certify(f1, f2, p, supports, x1, x2, opts);
  } catch (const CutoffExceeded& e) {
    std::cerr << "geosep certify: " << e.what() << "\n";
    return kExitKappaCutoff;
  }
  json j = certificate_to_json(cert);
  j["supports"] = supports_to_json(supports);
  emit(j, args.out);
  return kExitOk;
}

struct ReportArgs {
  std::string config_path, out, format = "csv";
};

std::vector<ReportRow> run_from_config(const ReportArgs& args) {
  const ExperimentConfig config = read_experiment_config(args.config_path);
  const auto rows = run_experiment(config);
  for (const auto& row : rows) {
    if (!row.failure.empty()) {
      std::cerr << "geosep: cell " << row.id << " failed: " << row.failure << "\n";
    }
  }
  if (args.format != "csv" && args.format != "jsonl") {
    throw std::invalid_argument("unknown report format '" + args.format + "' (csv|jsonl)");
  }
  const ReportFormat format = args.format == "csv" ? ReportFormat::csv : ReportFormat::jsonl;
  if (args.out.empty()) {
    write_report(rows, std::cout, format);
  } else {
    write_report(rows, args.out, format);
  }
  return rows;
}

int cmd_verify_bound(const ReportArgs& args) {
  const auto rows = run_from_config(args);
  int certified = 0;
  for (const auto& row : rows) {
    if (row.bound_holds.has_value()) ++certified;
  }
  const bool ok = all_certified_rows_pass(rows);
  std::cerr << "geosep verify-bound: " << rows.size() << " rows, " << certified
            << " certified, " << (ok ? "all checks passed" : "CHECK FAILED") << "\n";
  return ok ? kExitOk : kExitInputError;
}

int cmd_bench(const ReportArgs& args) {
  const auto rows = run_from_config(args);
  double total = 0.0, worst = 0.0;
  long iters = 0;
  bool failed = false;
  for (const auto& row : rows) {
    total += row.wall_ms;
    worst = std::max(worst, row.wall_ms);
    if (row.iterations) iters += *row.iterations;
    failed = failed || !row.failure.empty();
  }
  json summary;
  summary["cells"] = rows.size();
  summary["total_ms"] = total;
  summary["mean_ms"] = rows.empty() ? 0.0 : total / static_cast<double>(rows.size());
  summary["max_ms"] = worst;
  summary["solver_iterations"] = iters;
  std::cerr << summary.dump(2) << "\n";
  return failed ? kExitInputError : kExitOk;
}

struct DemoArgs {
  int n = 64;
  std::string missing_block = "28,36";
  std::uint64_t seed = 1;
  std::string out_dir = "demo_out";
  int spikes = 3;
  double tol = 1e-9;
};

int cmd_demo(const DemoArgs& args) {
  const size_t comma = args.missing_block.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--missing-block expects a,b (half-open)");
  }
  const int a = std::stoi(args.missing_block.substr(0, comma));
  const int b = std::stoi(args.missing_block.substr(comma + 1));

  const Instance inst = spikes_and_sinusoid_instance(args.n, a, b, args.spikes, args.seed);
  const ParsevalFrame& f1 = inst.f1;
  const ParsevalFrame& f2 = inst.f2;
  const CoordinatePartition& p = inst.partition;
  const Vec& x1 = inst.x1_true;
  const Vec& x2 = inst.x2_true;
  const Vec& x0 = inst.x0;

  SolveOptions opts;
  opts.tol = args.tol;
  const SolveResult result = solve_iterative(f1, f2, p, x0, opts);

  CertifyOptions copts;
  copts.exact = (f1.rows() + f2.rows()) <= kDefaultKappaCutoff;
  copts.samples = 2000;
  copts.seed = args.seed;
  const Certificate cert = certify(f1, f2, p, inst.supports, x1, x2, copts);

  std::filesystem::create_directories(args.out_dir);
  const auto in_dir = [&](const char* name) {
    return (std::filesystem::path(args.out_dir) / name).string();
  };
  write_signal_csv(x0, in_dir("x0.csv"));
  Vec mask = Vec::Zero(args.n);
  for (int i : p.missing()) mask[i] = 1;  // 1 marks a missing coordinate
  write_signal_csv(mask, in_dir("mask.csv"));
  write_signal_csv(result.x1_star, in_dir("x1_star.csv"));
  write_signal_csv(result.x2_star, in_dir("x2_star.csv"));
  write_signal_csv(result.x1_star + result.x2_star, in_dir("recovered.csv"));

  const Vec recovered = result.x1_star + result.x2_star;
  double missing_err_sq = 0.0;
  for (int i : p.missing()) {
    const double d = recovered[i] - x0[i];
    missing_err_sq += d * d;
  }
  json summary;
  summary["n"] = args.n;
  summary["missing_block"] = {a, b};
  summary["seed"] = args.seed;
  summary["spikes"] = inst.supports.lambda1;
  summary["dct_frequency"] = inst.supports.lambda2.front();
  summary["solve"] = solve_result_to_json(result);
  summary["solve"].erase("x1_star");
  summary["solve"].erase("x2_star");
  summary["l2_error_missing"] = std::sqrt(missing_err_sq);
  summary["l2_error_x1"] = norm_l2(result.x1_star - x1);
  summary["l2_error_x2"] = norm_l2(result.x2_star - x2);
  summary["certificate"] = certificate_to_json(cert);
  std::ofstream out(in_dir("summary.json"));
  out << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << std::endl;
  return result.converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint data completion + geometric separation with recovery certificates"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand(
      "solve", "Solve min ||F1 x1||_1 + ||F2 x2||_1 s.t. P_K(x1+x2) = P_K(x0)");
  solve->add_option("--phi1", solve_args.phi1, kFrameSpecHelp)->required();
  solve->add_option("--phi2", solve_args.phi2, kFrameSpecHelp)->required();
  solve->add_option("--known", solve_args.known, kKnownSpecHelp)->required();
  solve->add_option("--signal", solve_args.signal_path,
                    "x0 as JSON array or single-column CSV")->required();
  solve->add_option("--method", solve_args.method, "iterative | lp (exact simplex oracle)");
  solve->add_option("--tol", solve_args.tol, "iterative convergence tolerance");
  solve->add_option("--max-iters", solve_args.max_iters, "iterative iteration cap");
  solve->add_option("--out", solve_args.out, "write the result JSON here instead of stdout");
  solve->add_option("--trace", solve_args.trace, "write per-iteration residuals CSV here");

  CertifyArgs certify_args;
  auto* certify = app.add_subcommand(
      "certify", "Compute delta, joint concentration kappa and the bound 2*delta/(1-2*kappa)");
  certify->add_option("--phi1", certify_args.phi1, kFrameSpecHelp)->required();
  certify->add_option("--phi2", certify_args.phi2, kFrameSpecHelp)->required();
  certify->add_option("--known", certify_args.known, kKnownSpecHelp)->required();
  certify->add_option("--x1", certify_args.x1_path, "component 1 signal file")->required();
  certify->add_option("--x2", certify_args.x2_path, "component 2 signal file")->required();
  auto* supports_opt =
      certify->add_option("--supports", certify_args.supports_path,
                          "supports JSON file {\"lambda1\": [...], \"lambda2\": [...]}");
  certify->add_option("--topk", certify_args.topk,
                      "k1,k2: supports = largest-magnitude coefficients")
      ->excludes(supports_opt);
  certify->add_option("--kappa", certify_args.kappa,
                      "exact (sign-pattern oracle) | estimate (sampled lower bound)");
  certify->add_option("--samples", certify_args.samples, "samples for --kappa estimate");
  certify->add_option("--seed", certify_args.seed, "seed for --kappa estimate");
  certify->add_option("--cutoff", certify_args.cutoff,
                      "max m1+m2 for the exact oracle (default 18)");
  certify->add_option("--out", certify_args.out, "write the certificate JSON here");

  ReportArgs verify_args;
  auto* verify = app.add_subcommand(
      "verify-bound", "Run a harness config and check the recovery bound on every cell");
  verify->add_option("--config", verify_args.config_path, "experiment config JSON")->required();
  verify->add_option("--out", verify_args.out, "report path (default stdout)");
  verify->add_option("--format", verify_args.format, "csv | jsonl");

  ReportArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run a harness config and report timings");
  bench->add_option("--config", bench_args.config_path, "experiment config JSON")->required();
  bench->add_option("--out", bench_args.out, "report path (optional)");
  bench->add_option("--format", bench_args.format, "csv | jsonl");

  DemoArgs demo_args;
  auto* demo = app.add_subcommand(
      "demo", "Spikes + sinusoid inpainting vignette (identity + dct frames)");
  demo->add_option("--n", demo_args.n, "signal length");
  demo->add_option("--missing-block", demo_args.missing_block, "a,b: missing coordinates [a,b)");
  demo->add_option("--seed", demo_args.seed, "instance seed");
  demo->add_option("--out", demo_args.out_dir, "output directory");
  demo->add_option("--spikes", demo_args.spikes, "number of spikes");
  demo->add_option("--tol", demo_args.tol, "solver tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the diagnostic to stderr
    return kExitInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_args);
    if (certify->parsed()) return cmd_certify(certify_args);
    if (verify->parsed()) return cmd_verify_bound(verify_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    if (demo->parsed()) return cmd_demo(demo_args);
  } catch (const CutoffExceeded& e) {
    std::cerr << "geosep: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "geosep: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
