#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "voipstat/kernels/kernels.hpp"

namespace voipstat::kernels::serial {

double gev_loglik_terms(std::span<const double> data, double xi, double sigma, double mu) {
  return detail::gev_terms_range(data, 0, data.size(), xi, sigma, mu);
}

void map(std::span<const double> x, std::span<double> out, const ScalarFn& fn) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = fn(x[i]);
}

double ks_statistic(std::span<const double> cdf_at_sorted) {
  double best = 0.0;
  for (std::size_t i = 0; i < cdf_at_sorted.size(); ++i) {
    best = std::fmax(best, detail::ks_point(i, cdf_at_sorted.size(), cdf_at_sorted[i]));
  }
  return best;
}

// Two-pointer sweeps: `lo` trails the open left edge, `hi` is one past the
// last sample sharing t_i.
void moving_std(std::span<const double> t, std::span<const double> v, double window,
                std::span<double> out) {
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (hi < t.size() && t[hi] <= t[i]) ++hi;
    while (lo < hi && !detail::inside_window(t[lo], t[i], window)) ++lo;
    out[i] = detail::window_std(v, lo, hi);
  }
}

void window_sum(std::span<const double> t, std::span<const double> w, double window,
                std::span<double> out) {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double running = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (hi < t.size() && t[hi] <= t[i]) running += w[hi++];
    while (lo < hi && !detail::inside_window(t[lo], t[i], window)) running -= w[lo++];
    out[i] = running;
  }
}

}  // namespace voipstat::kernels::serial
