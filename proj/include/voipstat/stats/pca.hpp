#pragma once

#include <cstddef>
#include <vector>

namespace voipstat::stats {

using Matrix = std::vector<std::vector<double>>;  // row-major

struct PcaResult {
  Matrix components;              // k rows of length m, orthonormal
  std::vector<double> explained;  // k eigenvalues, non-increasing
  std::vector<double> explained_ratio;
  Matrix loadings;                // m rows (variables) by k columns
  Matrix scores;                  // n rows (observations) by k columns
  std::vector<double> means;
  std::vector<double> scales;     // 1 unless standardized
  double total_variance = 0.0;    // trace of the decomposed matrix
};

struct EigenResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // vectors[i] pairs with values[i]
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix; iterates until the
/// off-diagonal Frobenius norm falls below 1e-12 (relative to the matrix norm
/// when that exceeds one).
EigenResult jacobi_eigen(Matrix a);

/// Principal components of an n-by-m observation matrix (rows are
/// observations). Columns are centered, and scaled to unit variance when
/// `standardize` is set, so the decomposition is of the correlation matrix.
/// Each component is signed so its largest-magnitude loading is positive.
///
/// Throws `Error(TooFewPoints)` for n < 2, `Error(LengthMismatch)` for ragged
/// rows, `Error(BadK)` unless 1 <= k <= m, and `Error(ZeroVariance)` when
/// standardizing a constant column.
PcaResult pca(const Matrix& observations, std::size_t k, bool standardize = true);

}  // namespace voipstat::stats
