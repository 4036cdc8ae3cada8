#include "voipstat/evt/ks.hpp"

#include <algorithm>
#include <vector>

#include "voipstat/error.hpp"
#include "voipstat/kernels/kernels.hpp"

namespace voipstat::evt {

double ks_distance(std::span<const double> data, const std::function<double(double)>& cdf) {
  if (data.empty()) throw Error(ErrorCode::EmptyData, "KS distance of an empty sample");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> f(sorted.size());
  kernels::parallel::map(sorted, f, cdf);
  return kernels::parallel::ks_statistic(f);
}

}  // namespace voipstat::evt
