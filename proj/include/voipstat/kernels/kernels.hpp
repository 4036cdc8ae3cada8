#pragma once

// Data-parallel inner loops shared by the metrics and evt modules.
//
// Every kernel exists twice with an identical signature: `serial::` is the
// plain reference loop kept for testing, `parallel::` is the OpenMP version
// the library calls. Parallel reductions sum fixed-size blocks and then fold
// the block partials in order, so results do not depend on the thread count.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

namespace voipstat::kernels {

/// Shape magnitudes below this use the Gumbel branch of the GEV formulas.
inline constexpr double kGumbelShapeEps = 1e-6;

/// Block length of the deterministic parallel reductions.
inline constexpr std::size_t kReductionBlock = 2048;

/// Samples closer than this to a window's open left edge count as outside it.
inline constexpr double kWindowEdgeTolerance = 1e-9;

/// omega = log(1 + xi*y) / xi for the standardized value y = (z - mu) / sigma.
/// Returns NaN when 1 + xi*y <= 0. In the Gumbel band the series
/// y - xi*y^2/2 + xi^2*y^3/3 keeps the function smooth across xi = 0.
inline double gev_omega(double xi, double y) noexcept {
  if (std::fabs(xi) < kGumbelShapeEps) {
    return y * (1.0 - xi * y / 2.0 + xi * xi * y * y / 3.0);
  }
  const double t = xi * y;
  if (!(t > -1.0)) return std::nan("");
  return std::log1p(t) / xi;
}

using ScalarFn = std::function<double(double)>;

namespace serial {

/// Sum over data of -(1+xi)*omega_i - exp(-omega_i); -inf if any point is
/// off-support. The -n*log(sigma) term is left to the caller.
double gev_loglik_terms(std::span<const double> data, double xi, double sigma, double mu);

/// out[i] = fn(x[i]).
void map(std::span<const double> x, std::span<double> out, const ScalarFn& fn);

/// Kolmogorov-Smirnov statistic for sorted data given model CDF values at
/// those points: max_i max(|i/n - F_i|, |(i-1)/n - F_i|).
double ks_statistic(std::span<const double> cdf_at_sorted);

/// Sample standard deviation (n-1) over (t_i - window, t_i]; 0 for windows
/// with fewer than two samples. `t` must be non-decreasing.
void moving_std(std::span<const double> t, std::span<const double> v, double window,
                std::span<double> out);

/// Sum of weights over (t_i - window, t_i]. `t` must be non-decreasing.
void window_sum(std::span<const double> t, std::span<const double> w, double window,
                std::span<double> out);

}  // namespace serial

namespace parallel {

double gev_loglik_terms(std::span<const double> data, double xi, double sigma, double mu);
void map(std::span<const double> x, std::span<double> out, const ScalarFn& fn);
double ks_statistic(std::span<const double> cdf_at_sorted);
void moving_std(std::span<const double> t, std::span<const double> v, double window,
                std::span<double> out);
void window_sum(std::span<const double> t, std::span<const double> w, double window,
                std::span<double> out);

}  // namespace parallel

}  // namespace voipstat::kernels
