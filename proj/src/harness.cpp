#include "geosep/harness.hpp"

#include "geosep/io.hpp"
#include "geosep/rng.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

namespace geosep {

namespace {

// Partial Fisher-Yates; deterministic per rng state.
std::vector<int> sample_without_replacement(int m, int k, SplitMix64& rng) {
  std::vector<int> pool(static_cast<size_t>(m));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + rng.next_below(m - i);
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }
  return {pool.begin(), pool.begin() + k};
}

Vec draw_component(const ParsevalFrame& f, int k, SplitMix64& rng) {
  Vec coeffs = Vec::Zero(f.rows());
  const std::vector<int> atoms = sample_without_replacement(f.rows(), k, rng);
  for (int i : atoms) {
    const double magnitude = 1.0 + rng.next_double();  // [1, 2): bounded away from 0
    coeffs[i] = (rng.next() & 1ULL) ? magnitude : -magnitude;
  }
  return f.synthesize(coeffs);
}

IndexSet analysis_support(const Vec& coeffs) {
  IndexSet out;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (std::abs(coeffs[i]) > 1e-12) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

Instance gen_instance(const InstanceSpec& spec, std::uint64_t seed) {
  ParsevalFrame f1 = parse_frame_spec(spec.phi1);
  ParsevalFrame f2 = parse_frame_spec(spec.phi2);
  if (f1.cols() != spec.n || f2.cols() != spec.n) {
    throw std::invalid_argument("gen_instance: frame dimension does not match n=" +
                                std::to_string(spec.n));
  }
  if (spec.k1 < 0 || spec.k1 > f1.rows() || spec.k2 < 0 || spec.k2 > f2.rows()) {
    throw std::invalid_argument("gen_instance: sparsity exceeds coefficient count");
  }

  SplitMix64 rng(seed);
  Vec x1 = draw_component(f1, spec.k1, rng);
  Vec x2 = draw_component(f2, spec.k2, rng);

  IndexSet known;
  switch (spec.mask.kind) {
    case MaskRule::Kind::random:
      if (spec.mask.p < 0.0 || spec.mask.p > 1.0) {
        throw std::invalid_argument("gen_instance: mask probability outside [0, 1]");
      }
      for (int i = 0; i < spec.n; ++i) {
        if (rng.next_double() >= spec.mask.p) known.push_back(i);
      }
      break;
    case MaskRule::Kind::block:
      if (spec.mask.a < 0 || spec.mask.a > spec.mask.b || spec.mask.b > spec.n) {
        throw std::invalid_argument("gen_instance: bad missing block [" +
                                    std::to_string(spec.mask.a) + ", " +
                                    std::to_string(spec.mask.b) + ")");
      }
      for (int i = 0; i < spec.n; ++i) {
        if (i < spec.mask.a || i >= spec.mask.b) known.push_back(i);
      }
      break;
  }
  CoordinatePartition partition(spec.n, std::move(known));

  SupportPair supports;
  switch (spec.supports.kind) {
    case SupportRule::Kind::exact:
      supports.lambda1 = analysis_support(f1.analyze(x1));
      supports.lambda2 = analysis_support(f2.analyze(x2));
      break;
    case SupportRule::Kind::topk: {
      const int k1 = spec.supports.k1 >= 0 ? spec.supports.k1 : spec.k1;
      const int k2 = spec.supports.k2 >= 0 ? spec.supports.k2 : spec.k2;
      supports = select_supports(f1, f2, x1, x2, std::min(k1, f1.rows()), std::min(k2, f2.rows()));
      break;
    }
  }

  Vec x0 = x1 + x2;
  return Instance{std::move(f1), std::move(f2), std::move(partition),
                  std::move(x1), std::move(x2), std::move(x0),
                  std::move(supports), seed};
}

Instance spikes_and_sinusoid_instance(int n, int block_a, int block_b, int n_spikes,
                                      std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("spikes_and_sinusoid: n must be at least 4");
  if (block_a < 0 || block_a > block_b || block_b > n) {
    throw std::invalid_argument("spikes_and_sinusoid: bad missing block [" +
                                std::to_string(block_a) + ", " + std::to_string(block_b) + ")");
  }
  ParsevalFrame f1 = identity_frame(n);
  ParsevalFrame f2 = dct_frame(n);
  IndexSet known;
  for (int i = 0; i < n; ++i) {
    if (i < block_a || i >= block_b) known.push_back(i);
  }
  if (static_cast<int>(known.size()) < n_spikes || n_spikes < 0) {
    throw std::invalid_argument("spikes_and_sinusoid: not enough known coordinates for " +
                                std::to_string(n_spikes) + " spikes");
  }
  CoordinatePartition partition(n, known);

  SplitMix64 rng(seed);
  Vec x1 = Vec::Zero(n);
  IndexSet spike_at;
  while (static_cast<int>(spike_at.size()) < n_spikes) {
    const int i = known[static_cast<size_t>(rng.next_below(static_cast<int>(known.size())))];
    if (x1[i] != 0.0) continue;
    x1[i] = (rng.next() & 1ULL ? 1.0 : -1.0) * (1.0 + rng.next_double());
    spike_at.push_back(i);
  }
  std::sort(spike_at.begin(), spike_at.end());

  const int freq = 1 + rng.next_below(n - 1);
  Vec c2 = Vec::Zero(n);
  c2[freq] = (rng.next() & 1ULL ? 1.0 : -1.0) * (1.0 + rng.next_double());
  Vec x2 = f2.synthesize(c2);

  Vec x0 = x1 + x2;
  return Instance{std::move(f1), std::move(f2), std::move(partition),
                  std::move(x1), std::move(x2), std::move(x0),
                  SupportPair{std::move(spike_at), {freq}}, seed};
}

BoundCheck verify_recovery_bound(const Instance& inst, const SolveResult& result,
                          const Certificate& cert) {
  constexpr double kSlack = 1e-6;

  BoundCheck check;
  check.certificate = cert;

  const Vec d1 = result.x1_star - inst.x1_true;
  const Vec d2 = result.x2_star - inst.x2_true;
  check.error = norm_l2(d1) + norm_l2(d2);

  const Vec c1_star = inst.f1.analyze(result.x1_star);
  const Vec c2_star = inst.f2.analyze(result.x2_star);
  const Vec c1_diff = inst.f1.analyze(d1);
  const Vec c2_diff = inst.f2.analyze(d2);

  std::vector<char> on1(static_cast<size_t>(inst.f1.rows()), 0);
  std::vector<char> on2(static_cast<size_t>(inst.f2.rows()), 0);
  for (int i : inst.supports.lambda1) on1[static_cast<size_t>(i)] = 1;
  for (int i : inst.supports.lambda2) on2[static_cast<size_t>(i)] = 1;

  double off_star = 0.0;  // ||1_{L1^c} f1 x1*||_1 + ||1_{L2^c} f2 x2*||_1
  double on_diff = 0.0;   // ||1_{L1} f1 (x1*-x1_0)||_1 + ||1_{L2} f2 (x2*-x2_0)||_1
  for (Eigen::Index i = 0; i < c1_star.size(); ++i) {
    if (on1[static_cast<size_t>(i)]) {
      on_diff += std::abs(c1_diff[i]);
    } else {
      off_star += std::abs(c1_star[i]);
    }
  }
  for (Eigen::Index i = 0; i < c2_star.size(); ++i) {
    if (on2[static_cast<size_t>(i)]) {
      on_diff += std::abs(c2_diff[i]);
    } else {
      off_star += std::abs(c2_star[i]);
    }
  }

  if (result.method == SolveMethod::lp_exact) {
    check.part2_holds = off_star <= cert.delta + on_diff + kSlack;
  }

  if (cert.kappa_kind == KappaKind::exact && cert.kappa < 1.0) {
    const double lhs = norm_l1(c1_diff) + norm_l1(c2_diff);
    const double rhs = (off_star + cert.delta) / (1.0 - cert.kappa);
    check.intermezzo_holds = lhs <= rhs + kSlack;
  }

  if (result.method == SolveMethod::lp_exact && cert.certified()) {
    check.bound_holds = check.error <= cert.bound + kSlack;
  }
  return check;
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
  std::vector<ReportRow> rows;
  rows.reserve(config.seeds.size());
  for (size_t idx = 0; idx < config.seeds.size(); ++idx) {
    const std::uint64_t seed = config.seeds[idx];
    ReportRow row;
    row.id = "i" + std::to_string(idx) + "_s" + std::to_string(seed);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Instance inst = gen_instance(config.spec, seed);
      const int m1 = inst.f1.rows();
      const int m2 = inst.f2.rows();
      row.n = inst.partition.dimension();
      row.n_known = static_cast<int>(inst.partition.known().size());
      row.m1 = m1;
      row.m2 = m2;
      row.n_lambda1 = static_cast<int>(inst.supports.lambda1.size());
      row.n_lambda2 = static_cast<int>(inst.supports.lambda2.size());

      CertifyOptions copts;
      copts.exact = (m1 + m2) <= config.kappa_cutoff;
      copts.samples = config.kappa_samples;
      copts.seed = seed ^ 0x5deece66dULL;  // decoupled from the instance stream
      copts.kappa.cutoff = config.kappa_cutoff;
      const Certificate cert =
          certify(inst.f1, inst.f2, inst.partition, inst.supports, inst.x1_true, inst.x2_true,
                  copts);
      row.delta = cert.delta;
      row.kappa = cert.kappa;
      row.kappa_kind = to_string(cert.kappa_kind);
      if (cert.kappa_kind == KappaKind::lower_bound) {
        row.bound = "uncertified";
      } else if (std::isinf(cert.bound)) {
        row.bound = "inf";
      } else {
        row.bound = format_double(cert.bound);
      }

      std::optional<SolveResult> lp;
      if (row.n <= kLpExactMaxN && m1 + m2 <= kLpExactMaxRows) {
        lp = solve_lp_exact(inst.f1, inst.f2, inst.partition, inst.x0);
        row.objective_lp = lp->objective;
      }
      const SolveResult iter =
          solve_iterative(inst.f1, inst.f2, inst.partition, inst.x0, config.solver);
      row.objective_iter = iter.objective;
      row.iterations = iter.iterations;

      const SolveResult& primary = lp ? *lp : iter;
      const BoundCheck check = verify_recovery_bound(inst, primary, cert);
      row.error = check.error;
      row.bound_holds = check.bound_holds;
      row.intermezzo_holds = check.intermezzo_holds;
      row.part2_holds = check.part2_holds;
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string opt_double_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : "na";
}

std::string opt_bool_cell(const std::optional<bool>& v) {
  if (!v) return "na";
  return *v ? "true" : "false";
}

nlohmann::ordered_json opt_double_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

nlohmann::ordered_json opt_bool_json(const std::optional<bool>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

void write_report(const std::vector<ReportRow>& rows, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::csv) {
    out << "id,n,n_known,m1,m2,n_lambda1,n_lambda2,delta,kappa,kappa_kind,bound,"
           "objective_lp,objective_iter,error,bound_holds,intermezzo_holds,part2_holds,"
           "iterations,wall_ms\n";
    for (const ReportRow& r : rows) {
      out << r.id << ',' << r.n << ',' << r.n_known << ',' << r.m1 << ',' << r.m2 << ','
          << r.n_lambda1 << ',' << r.n_lambda2 << ',' << opt_double_cell(r.delta) << ','
          << opt_double_cell(r.kappa) << ',' << (r.kappa_kind.empty() ? "na" : r.kappa_kind)
          << ',' << (r.bound.empty() ? "na" : r.bound) << ',' << opt_double_cell(r.objective_lp)
          << ',' << opt_double_cell(r.objective_iter) << ',' << opt_double_cell(r.error) << ','
          << opt_bool_cell(r.bound_holds) << ',' << opt_bool_cell(r.intermezzo_holds) << ','
          << opt_bool_cell(r.part2_holds) << ','
          << (r.iterations ? std::to_string(*r.iterations) : "na") << ','
          << format_double(r.wall_ms) << '\n';
    }
    return;
  }
  for (const ReportRow& r : rows) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["n"] = r.n;
    j["n_known"] = r.n_known;
    j["m1"] = r.m1;
    j["m2"] = r.m2;
    j["n_lambda1"] = r.n_lambda1;
    j["n_lambda2"] = r.n_lambda2;
    j["delta"] = opt_double_json(r.delta);
    j["kappa"] = opt_double_json(r.kappa);
    j["kappa_kind"] = r.kappa_kind.empty() ? nlohmann::ordered_json(nullptr)
                                           : nlohmann::ordered_json(r.kappa_kind);
    if (r.bound == "inf" || r.bound == "uncertified") {
      j["bound"] = r.bound;
    } else if (r.bound.empty()) {
      j["bound"] = nullptr;
    } else {
      j["bound"] = std::stod(r.bound);
    }
    j["objective_lp"] = opt_double_json(r.objective_lp);
    j["objective_iter"] = opt_double_json(r.objective_iter);
    j["error"] = opt_double_json(r.error);
    j["bound_holds"] = opt_bool_json(r.bound_holds);
    j["intermezzo_holds"] = opt_bool_json(r.intermezzo_holds);
    j["part2_holds"] = opt_bool_json(r.part2_holds);
    j["iterations"] = r.iterations ? nlohmann::ordered_json(*r.iterations)
                                   : nlohmann::ordered_json(nullptr);
    j["wall_ms"] = r.wall_ms;
    out << j.dump() << '\n';
  }
}

void write_report(const std::vector<ReportRow>& rows, const std::string& path,
                  ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open '" + path + "'");
  write_report(rows, out, format);
  if (!out) throw std::runtime_error("write_report: write failed for '" + path + "'");
}

bool all_certified_rows_pass(const std::vector<ReportRow>& rows) {
  for (const ReportRow& r : rows) {
    if (!r.failure.empty()) return false;
    if (r.bound_holds && !*r.bound_holds) return false;
    if (r.intermezzo_holds && !*r.intermezzo_holds) return false;
    if (r.part2_holds && !*r.part2_holds) return false;
  }
  return true;
}

}  // namespace geosep
