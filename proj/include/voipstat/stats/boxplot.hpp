#pragma once

#include <span>
#include <vector>

namespace voipstat::stats {

struct BoxplotStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  std::vector<double> outliers;  // ascending
  std::size_t n = 0;
};

/// Quantile of sorted data by linear interpolation at 1-based position
/// p (n - 1) + 1.
double quantile_sorted(std::span<const double> sorted, double p);

/// Quartiles per `quantile_sorted`; whiskers at the most extreme points within
/// 1.5 iqr of the box. Throws `Error(EmptyData)`.
BoxplotStats boxplot_stats(std::span<const double> data);

}  // namespace voipstat::stats
