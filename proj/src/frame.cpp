#include "geosep/frame.hpp"

#include "geosep/rng.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

namespace geosep {

double parseval_residual(const Mat& analysis) {
  const Eigen::Index n = analysis.cols();
  Mat gram = analysis.transpose() * analysis;
  gram -= Mat::Identity(n, n);
  return gram.cwiseAbs().maxCoeff();
}

ParsevalFrame::ParsevalFrame(Mat analysis, std::string label)
    : analysis_(std::move(analysis)), label_(std::move(label)) {
  const Eigen::Index m = analysis_.rows();
  const Eigen::Index n = analysis_.cols();
  if (n < 1 || m < n) {
    throw std::invalid_argument("frame '" + label_ + "': need m >= n >= 1, got " +
                                std::to_string(m) + "x" + std::to_string(n));
  }
  if (!analysis_.allFinite()) {
    throw std::invalid_argument("frame '" + label_ + "': non-finite analysis entry");
  }
  const double residual = parseval_residual(analysis_);
  if (residual > kParsevalTolerance) {
    std::ostringstream msg;
    msg << "frame '" << label_ << "': columns not orthonormal, residual " << residual
        << " exceeds " << kParsevalTolerance;
    throw std::invalid_argument(msg.str());
  }
}

Vec ParsevalFrame::analyze(const Vec& x) const {
  if (x.size() != cols()) {
    throw std::invalid_argument("analyze: signal length " + std::to_string(x.size()) +
                                " does not match frame dimension " + std::to_string(cols()));
  }
  return analysis_ * x;
}

Vec ParsevalFrame::synthesize(const Vec& c) const {
  if (c.size() != rows()) {
    throw std::invalid_argument("synthesize: coefficient length " + std::to_string(c.size()) +
                                " does not match frame rows " + std::to_string(rows()));
  }
  return analysis_.transpose() * c;
}

ParsevalFrame identity_frame(int n) {
  if (n < 1) throw std::invalid_argument("identity_frame: n must be >= 1");
  return ParsevalFrame(Mat::Identity(n, n), "identity:n=" + std::to_string(n));
}

ParsevalFrame dct_frame(int n) {
  if (n < 1) throw std::invalid_argument("dct_frame: n must be >= 1");
  Mat a(n, n);
  const double c0 = std::sqrt(1.0 / n);
  const double ck = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k) {
    const double scale = (k == 0) ? c0 : ck;
    for (int j = 0; j < n; ++j) {
      a(k, j) = scale * std::cos(std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * n));
    }
  }
  return ParsevalFrame(std::move(a), "dct:n=" + std::to_string(n));
}

ParsevalFrame haar_frame(int n) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("haar_frame: n must be a power of 2, got " + std::to_string(n));
  }
  Mat a = Mat::Zero(n, n);
  a.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  int row = 1;
  // Scales coarse-to-fine; 2^level details per level, left-to-right.
  for (int level = 0; (1 << level) < n; ++level) {
    const int blocks = 1 << level;
    const int width = n / blocks;
    const int half = width / 2;
    const double value = std::sqrt(static_cast<double>(blocks) / n);
    for (int b = 0; b < blocks; ++b, ++row) {
      const int start = b * width;
      for (int j = 0; j < half; ++j) a(row, start + j) = value;
      for (int j = half; j < width; ++j) a(row, start + j) = -value;
    }
  }
  return ParsevalFrame(std::move(a), "haar:n=" + std::to_string(n));
}

ParsevalFrame union_frame(const ParsevalFrame& f1, const ParsevalFrame& f2) {
  if (f1.cols() != f2.cols()) {
    throw std::invalid_argument("union_frame: dimension mismatch " + std::to_string(f1.cols()) +
                                " vs " + std::to_string(f2.cols()));
  }
  Mat a(f1.rows() + f2.rows(), f1.cols());
  const double s = 1.0 / std::sqrt(2.0);
  a.topRows(f1.rows()) = s * f1.analysis();
  a.bottomRows(f2.rows()) = s * f2.analysis();
  return ParsevalFrame(std::move(a), "union:" + f1.label() + "+" + f2.label());
}

ParsevalFrame random_tight_frame(int m, int n, std::uint64_t seed) {
  if (n < 1 || m < n) {
    throw std::invalid_argument("random_tight_frame: need m >= n >= 1, got m=" +
                                std::to_string(m) + ", n=" + std::to_string(n));
  }
  SplitMix64 rng(seed);
  Mat g(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) g(i, j) = rng.next_gaussian();
  }
  // Modified Gram-Schmidt, two passes. Gaussian columns are almost surely
  // well separated; a rank drop at these sizes means a broken generator.
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        g.col(j) -= g.col(i).dot(g.col(j)) * g.col(i);
      }
      const double norm = g.col(j).norm();
      if (norm < 1e-10) {
        throw std::runtime_error("random_tight_frame: rank-deficient Gaussian draw");
      }
      g.col(j) /= norm;
    }
  }
  std::ostringstream label;
  label << "random:m=" << m << ",n=" << n << ",seed=" << seed;
  return ParsevalFrame(std::move(g), label.str());
}

namespace {

// key=value list, e.g. "m=96,n=64,seed=7".
std::uint64_t parse_u64(const std::string& token, const std::string& spec) {
  size_t pos = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(token, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("frame spec '" + spec + "': bad number '" + token + "'");
  }
  if (pos != token.size()) {
    throw std::invalid_argument("frame spec '" + spec + "': bad number '" + token + "'");
  }
  return value;
}

std::vector<std::pair<std::string, std::string>> parse_kv_list(const std::string& text,
                                                               const std::string& spec) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw std::invalid_argument("frame spec '" + spec + "': expected key=value, got '" + item +
                                  "'");
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

int required_n(const std::vector<std::pair<std::string, std::string>>& kv,
               const std::string& spec) {
  int n = -1;
  for (const auto& [k, v] : kv) {
    if (k == "n") {
      n = static_cast<int>(parse_u64(v, spec));
    } else {
      throw std::invalid_argument("frame spec '" + spec + "': unknown key '" + k + "'");
    }
  }
  if (n < 0) throw std::invalid_argument("frame spec '" + spec + "': missing n");
  return n;
}

ParsevalFrame basis_by_name(const std::string& name, int n, const std::string& spec) {
  if (name == "identity") return identity_frame(n);
  if (name == "dct") return dct_frame(n);
  if (name == "haar") return haar_frame(n);
  throw std::invalid_argument("frame spec '" + spec + "': unknown basis '" + name + "'");
}

}  // namespace

ParsevalFrame parse_frame_spec(const std::string& spec) {
  const size_t colon = spec.find(':');
  if (colon == std::string::npos || colon == 0) {
    throw std::invalid_argument("frame spec '" + spec + "': expected FAMILY:ARGS");
  }
  const std::string family = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);

  if (family == "identity" || family == "dct" || family == "haar") {
    return basis_by_name(family, required_n(parse_kv_list(rest, spec), spec), spec);
  }
  if (family == "random") {
    int m = -1, n = -1;
    std::uint64_t seed = 0;
    bool have_seed = false;
    for (const auto& [k, v] : parse_kv_list(rest, spec)) {
      if (k == "m") {
        m = static_cast<int>(parse_u64(v, spec));
      } else if (k == "n") {
        n = static_cast<int>(parse_u64(v, spec));
      } else if (k == "seed") {
        seed = parse_u64(v, spec);
        have_seed = true;
      } else {
        throw std::invalid_argument("frame spec '" + spec + "': unknown key '" + k + "'");
      }
    }
    if (m < 0 || n < 0 || !have_seed) {
      throw std::invalid_argument("frame spec '" + spec + "': random needs m, n and seed");
    }
    return random_tight_frame(m, n, seed);
  }
  if (family == "union") {
    // union:dct+identity:n=64
    const size_t colon2 = rest.find(':');
    if (colon2 == std::string::npos) {
      throw std::invalid_argument("frame spec '" + spec + "': expected union:A+B:n=N");
    }
    const std::string pair = rest.substr(0, colon2);
    const size_t plus = pair.find('+');
    if (plus == std::string::npos) {
      throw std::invalid_argument("frame spec '" + spec + "': expected union:A+B:n=N");
    }
    const int n = required_n(parse_kv_list(rest.substr(colon2 + 1), spec), spec);
    return union_frame(basis_by_name(pair.substr(0, plus), n, spec),
                       basis_by_name(pair.substr(plus + 1), n, spec));
  }
  if (family == "csv") {
    return frame_from_csv(rest);
  }
  throw std::invalid_argument("frame spec '" + spec + "': unknown family '" + family + "'");
}

ParsevalFrame frame_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("frame_from_csv: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("frame_from_csv: bad cell '" + cell + "' in '" + path + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("frame_from_csv: ragged rows in '" + path + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("frame_from_csv: empty file '" + path + "'");
  Mat a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows.front().size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return ParsevalFrame(std::move(a), "csv:" + path);
}

}  // namespace geosep
