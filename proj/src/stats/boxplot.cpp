#include "voipstat/stats/boxplot.hpp"

#include <algorithm>
#include <cmath>

#include "voipstat/error.hpp"

namespace voipstat::stats {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyData, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::DomainError, "quantile level outside [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxplotStats boxplot_stats(std::span<const double> data) {
  if (data.empty()) throw Error(ErrorCode::EmptyData, "boxplot of an empty sample");
  std::vector<double> s(data.begin(), data.end());
  std::sort(s.begin(), s.end());

  BoxplotStats b;
  b.n = s.size();
  b.median = quantile_sorted(s, 0.5);
  b.q1 = quantile_sorted(s, 0.25);
  b.q3 = quantile_sorted(s, 0.75);
  b.iqr = b.q3 - b.q1;
  const double fence_lo = b.q1 - 1.5 * b.iqr;
  const double fence_hi = b.q3 + 1.5 * b.iqr;
  b.whisker_lo = *std::lower_bound(s.begin(), s.end(), fence_lo);
  b.whisker_hi = *(std::upper_bound(s.begin(), s.end(), fence_hi) - 1);
  for (double v : s) {
    if (v < fence_lo || v > fence_hi) b.outliers.push_back(v);
  }
  return b;
}

}  // namespace voipstat::stats
