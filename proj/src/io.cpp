#include "geosep/io.hpp"

#include "geosep/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace geosep {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Vec signal_from_string(const std::string& text) {
  size_t first = 0;
  while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  std::vector<double> values;
  if (first < text.size() && text[first] == '[') {
    const json j = json::parse(text);
    if (!j.is_array()) throw std::runtime_error("signal: expected a JSON array");
    for (const auto& v : j) {
      if (!v.is_number()) throw std::runtime_error("signal: non-numeric JSON entry");
      values.push_back(v.get<double>());
    }
  } else {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      // tolerate trailing commas/whitespace in single-column CSV
      while (!line.empty() && (line.back() == ',' || line.back() == '\r' || line.back() == ' ')) {
        line.pop_back();
      }
      if (line.empty()) continue;
      size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(line, &pos);
      } catch (const std::exception&) {
        throw std::runtime_error("signal: bad CSV line '" + line + "'");
      }
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos != line.size()) throw std::runtime_error("signal: bad CSV line '" + line + "'");
      values.push_back(v);
    }
  }
  if (values.empty()) throw std::runtime_error("signal: no entries");
  Vec x(static_cast<Eigen::Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) x[static_cast<Eigen::Index>(i)] = values[i];
  require_finite(x, "signal");
  return x;
}

Vec read_signal(const std::string& path) {
  try {
    return signal_from_string(read_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error("read_signal('" + path + "'): " + e.what());
  }
}

void write_signal_csv(const Vec& x, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_signal_csv: cannot open '" + path + "'");
  for (Eigen::Index i = 0; i < x.size(); ++i) out << format_double(x[i]) << '\n';
}

IndexSet parse_known_spec(const std::string& spec, int n) {
  if (spec == "all") {
    IndexSet all(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
    return all;
  }
  if (spec == "none") return {};
  const size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("known spec '" + spec +
                                "': expected all|none|list:..|block:a,b|random:p,seed");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "list") {
    IndexSet out;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw std::invalid_argument("known spec '" + spec + "': bad index '" + item + "'");
      }
    }
    return normalize_index_set(std::move(out), n, "known spec '" + spec + "'");
  }
  if (kind == "block") {
    // K_SPEC names the known set, so block:a,b means K = [a, b).
    const size_t comma = rest.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("known spec '" + spec + "': expected block:a,b");
    }
    int a = 0, b = 0;
    try {
      a = std::stoi(rest.substr(0, comma));
      b = std::stoi(rest.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("known spec '" + spec + "': bad block bounds");
    }
    if (a < 0 || a > b || b > n) {
      throw std::invalid_argument("known spec '" + spec + "': block out of range");
    }
    IndexSet out;
    for (int i = a; i < b; ++i) out.push_back(i);
    return out;
  }
  if (kind == "random") {
    const size_t comma = rest.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("known spec '" + spec + "': expected random:p,seed");
    }
    double p = 0;
    std::uint64_t seed = 0;
    try {
      p = std::stod(rest.substr(0, comma));
      seed = std::stoull(rest.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("known spec '" + spec + "': bad p or seed");
    }
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument("known spec '" + spec + "': p outside [0, 1]");
    }
    SplitMix64 rng(seed);
    IndexSet out;
    for (int i = 0; i < n; ++i) {
      if (rng.next_double() < p) out.push_back(i);
    }
    return out;
  }
  throw std::invalid_argument("known spec '" + spec + "': unknown kind '" + kind + "'");
}

json partition_to_json(const CoordinatePartition& p) {
  return json{{"n", p.dimension()}, {"known", p.known()}};
}

CoordinatePartition partition_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("known")) {
    throw std::runtime_error("partition JSON needs fields 'n' and 'known'");
  }
  return CoordinatePartition(j.at("n").get<int>(), j.at("known").get<IndexSet>());
}

json certificate_to_json(const Certificate& c) {
  json j;
  j["delta"] = c.delta;
  j["kappa"] = c.kappa;
  j["kappa_kind"] = to_string(c.kappa_kind);
  if (c.kappa_kind == KappaKind::lower_bound) {
    j["bound"] = "uncertified";
  } else if (std::isinf(c.bound)) {
    j["bound"] = "inf";
  } else {
    j["bound"] = c.bound;
  }
  if (c.degenerate) j["degenerate"] = true;
  return j;
}

json solve_result_to_json(const SolveResult& r) {
  json j;
  j["method"] = to_string(r.method);
  j["objective"] = r.objective;
  j["feasibility_residual"] = r.feasibility_residual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["x1_star"] = std::vector<double>(r.x1_star.begin(), r.x1_star.end());
  j["x2_star"] = std::vector<double>(r.x2_star.begin(), r.x2_star.end());
  return j;
}

json supports_to_json(const SupportPair& s) {
  SupportPair sorted = s;
  std::sort(sorted.lambda1.begin(), sorted.lambda1.end());
  std::sort(sorted.lambda2.begin(), sorted.lambda2.end());
  return json{{"lambda1", sorted.lambda1}, {"lambda2", sorted.lambda2}};
}

SupportPair supports_from_json(const json& j) {
  if (!j.contains("lambda1") || !j.contains("lambda2")) {
    throw std::runtime_error("supports JSON needs fields 'lambda1' and 'lambda2'");
  }
  return SupportPair{j.at("lambda1").get<IndexSet>(), j.at("lambda2").get<IndexSet>()};
}

SupportPair read_supports(const std::string& path) {
  try {
    return supports_from_json(json::parse(read_file(path)));
  } catch (const std::exception& e) {
    throw std::runtime_error("read_supports('" + path + "'): " + e.what());
  }
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig config;
  if (j.contains("frames")) {
    const auto& frames = j.at("frames");
    if (frames.contains("phi1")) config.spec.phi1 = frames.at("phi1").get<std::string>();
    if (frames.contains("phi2")) config.spec.phi2 = frames.at("phi2").get<std::string>();
  }
  if (j.contains("n")) config.spec.n = j.at("n").get<int>();
  if (j.contains("sparsity")) {
    const auto& sp = j.at("sparsity");
    if (sp.contains("k1")) config.spec.k1 = sp.at("k1").get<int>();
    if (sp.contains("k2")) config.spec.k2 = sp.at("k2").get<int>();
  }
  if (j.contains("mask")) {
    const auto& mask = j.at("mask");
    const std::string rule = mask.value("rule", "block");
    if (rule == "random") {
      config.spec.mask.kind = MaskRule::Kind::random;
      config.spec.mask.p = mask.value("p", 0.0);
    } else if (rule == "block") {
      config.spec.mask.kind = MaskRule::Kind::block;
      config.spec.mask.a = mask.value("a", 0);
      config.spec.mask.b = mask.value("b", 0);
    } else {
      throw std::runtime_error("config: unknown mask rule '" + rule + "'");
    }
  }
  if (j.contains("supports")) {
    const auto& sup = j.at("supports");
    const std::string rule = sup.value("rule", "exact");
    if (rule == "exact") {
      config.spec.supports.kind = SupportRule::Kind::exact;
    } else if (rule == "topk") {
      config.spec.supports.kind = SupportRule::Kind::topk;
      config.spec.supports.k1 = sup.value("k1", sup.value("k", -1));
      config.spec.supports.k2 = sup.value("k2", sup.value("k", -1));
    } else {
      throw std::runtime_error("config: unknown support rule '" + rule + "'");
    }
  }
  if (j.contains("seeds")) {
    config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  if (j.contains("solver")) {
    const auto& solver = j.at("solver");
    config.solver.max_iters = solver.value("max_iters", config.solver.max_iters);
    config.solver.tol = solver.value("tol", config.solver.tol);
    config.solver.step_primal = solver.value("step_primal", config.solver.step_primal);
    config.solver.step_dual = solver.value("step_dual", config.solver.step_dual);
  }
  if (j.contains("kappa")) {
    const auto& kappa = j.at("kappa");
    config.kappa_cutoff = kappa.value("cutoff", config.kappa_cutoff);
    config.kappa_samples = kappa.value("samples", config.kappa_samples);
  }
  return config;
}

ExperimentConfig read_experiment_config(const std::string& path) {
  try {
    return experiment_config_from_json(json::parse(read_file(path)));
  } catch (const std::exception& e) {
    throw std::runtime_error("read_experiment_config('" + path + "'): " + e.what());
  }
}

}  // namespace geosep
