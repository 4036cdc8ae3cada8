#include "voipstat/stats/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "voipstat/error.hpp"

namespace voipstat::stats {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i != j) s += a[i][j] * a[i][j];
    }
  }
  return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const auto& row : a) {
    for (double v : row) s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace

EigenResult jacobi_eigen(Matrix a) {
  const std::size_t m = a.size();
  Matrix v(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) v[i][i] = 1.0;

  const double threshold = 1e-12 * std::max(1.0, frobenius_norm(a));
  EigenResult r;
  for (; r.sweeps < 100 && off_diagonal_norm(a) >= threshold; ++r.sweeps) {
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });
  for (std::size_t idx : order) {
    r.values.push_back(a[idx][idx]);
    std::vector<double> col(m);
    for (std::size_t k = 0; k < m; ++k) col[k] = v[k][idx];
    r.vectors.push_back(std::move(col));
  }
  return r;
}

PcaResult pca(const Matrix& observations, std::size_t k, bool standardize) {
  const std::size_t n = observations.size();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "PCA needs at least two observations");
  const std::size_t m = observations.front().size();
  for (const auto& row : observations) {
    if (row.size() != m) throw Error(ErrorCode::LengthMismatch, "observation rows differ in length");
  }
  if (k < 1 || k > m) {
    throw Error(ErrorCode::BadK, "k = " + std::to_string(k) + " with " + std::to_string(m) + " variables");
  }

  PcaResult r;
  r.means.assign(m, 0.0);
  r.scales.assign(m, 1.0);
  for (const auto& row : observations) {
    for (std::size_t j = 0; j < m; ++j) r.means[j] += row[j];
  }
  for (double& mean : r.means) mean /= static_cast<double>(n);

  Matrix z(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) z[i][j] = observations[i][j] - r.means[j];
  }
  if (standardize) {
    for (std::size_t j = 0; j < m; ++j) {
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += z[i][j] * z[i][j];
      const double sd = std::sqrt(ss / static_cast<double>(n - 1));
      if (!(sd > 0.0)) throw Error(ErrorCode::ZeroVariance, "variable " + std::to_string(j) + " is constant");
      r.scales[j] = sd;
      for (std::size_t i = 0; i < n; ++i) z[i][j] /= sd;
    }
  }

  Matrix cov(m, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += z[i][a] * z[i][b];
      cov[a][b] = cov[b][a] = s / static_cast<double>(n - 1);
    }
  }
  for (std::size_t j = 0; j < m; ++j) r.total_variance += cov[j][j];

  EigenResult eig = jacobi_eigen(cov);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> dir = eig.vectors[c];
    std::size_t lead = 0;
    for (std::size_t j = 1; j < m; ++j) {
      if (std::fabs(dir[j]) > std::fabs(dir[lead])) lead = j;
    }
    if (dir[lead] < 0.0) {
      for (double& d : dir) d = -d;
    }
    r.components.push_back(std::move(dir));
    const double value = std::max(0.0, eig.values[c]);
    r.explained.push_back(value);
    r.explained_ratio.push_back(r.total_variance > 0.0 ? value / r.total_variance : 0.0);
  }

  r.loadings.assign(m, std::vector<double>(k));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t c = 0; c < k; ++c) r.loadings[j][c] = r.components[c][j];
  }
  r.scores.assign(n, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += z[i][j] * r.components[c][j];
      r.scores[i][c] = s;
    }
  }
  return r;
}

}  // namespace voipstat::stats
