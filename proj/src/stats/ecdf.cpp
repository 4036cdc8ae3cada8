#include "voipstat/stats/ecdf.hpp"

#include <algorithm>

#include "voipstat/error.hpp"

namespace voipstat::stats {

EmpiricalCdf::EmpiricalCdf(std::span<const double> data) : sorted_(data.begin(), data.end()) {
  if (sorted_.empty()) throw Error(ErrorCode::EmptyData, "empirical CDF of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
  const double n = static_cast<double>(sorted_.size());
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) continue;
    points_.push_back(sorted_[i]);
    probs_.push_back(static_cast<double>(i + 1) / n);
  }
}

double EmpiricalCdf::operator()(double x) const noexcept {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

}  // namespace voipstat::stats
