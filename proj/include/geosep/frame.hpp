#pragma once

#include "geosep/types.hpp"

#include <cstdint>
#include <string>

namespace geosep {

// Columns of `analysis` must be orthonormal to this max-entrywise residual
// of analysis^T * analysis - I. Constructors check it and fail loudly.
inline constexpr double kParsevalTolerance = 1e-8;

// Max-entrywise residual of A^T A - I; usable on raw candidate matrices.
double parseval_residual(const Mat& analysis);

// Analysis operator of a Parseval frame on R^n, stored as a dense m x n
// matrix (m >= n) with orthonormal columns, so ||analysis * x||_2 = ||x||_2.
class ParsevalFrame {
 public:
  ParsevalFrame(Mat analysis, std::string label);

  int rows() const { return static_cast<int>(analysis_.rows()); }  // m
  int cols() const { return static_cast<int>(analysis_.cols()); }  // n
  const Mat& analysis() const { return analysis_; }
  const std::string& label() const { return label_; }

  // Frame coefficients analysis * x, length m.
  Vec analyze(const Vec& x) const;

  // Adjoint analysis^T * c, length n; synthesize(analyze(x)) == x.
  Vec synthesize(const Vec& c) const;

  double verify_parseval() const { return parseval_residual(analysis_); }

 private:
  Mat analysis_;
  std::string label_;
};

ParsevalFrame identity_frame(int n);

// Orthonormal DCT-II basis: row k, column j is c_k * cos(pi*(2j+1)*k/(2n))
// with c_0 = sqrt(1/n) and c_k = sqrt(2/n) for k >= 1.
ParsevalFrame dct_frame(int n);

// Orthonormal Haar basis, n a power of two. Row order: scaling row first,
// then detail rows coarse-to-fine, left-to-right within each scale.
ParsevalFrame haar_frame(int n);

// Stacks [f1/sqrt(2); f2/sqrt(2)]; Parseval since (1/2)(I + I) = I.
ParsevalFrame union_frame(const ParsevalFrame& f1, const ParsevalFrame& f2);

// Orthonormal-column factor of a seeded Gaussian m x n matrix (modified
// Gram-Schmidt with reorthogonalization). Deterministic per seed.
ParsevalFrame random_tight_frame(int m, int n, std::uint64_t seed);

// Frame spec strings used by the CLI and config files:
//   identity:n=64 | dct:n=64 | haar:n=64 | random:m=96,n=64,seed=7
//   union:dct+identity:n=64 | csv:PATH
ParsevalFrame parse_frame_spec(const std::string& spec);

// Loads an m x n analysis matrix from CSV (m rows, n columns); rejects
// matrices whose Parseval residual exceeds kParsevalTolerance.
ParsevalFrame frame_from_csv(const std::string& path);

}  // namespace geosep
