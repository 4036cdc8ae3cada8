#pragma once

#include <functional>
#include <span>

namespace voipstat::evt {

/// E_max = sup_x |D_n(x) - D(x)| between the empirical CDF of `data` and the
/// model CDF, evaluated at the jumps of D_n. Throws `Error(EmptyData)`.
double ks_distance(std::span<const double> data, const std::function<double(double)>& cdf);

}  // namespace voipstat::evt
