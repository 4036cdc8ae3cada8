#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "detail.hpp"
#include "voipstat/kernels/kernels.hpp"

namespace voipstat::kernels::parallel {

namespace {

struct WindowBounds {
  std::size_t begin;
  std::size_t end;
};

WindowBounds bounds_at(std::span<const double> t, std::size_t i, double window) {
  const auto end = std::upper_bound(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(), t[i]);
  const auto begin = std::partition_point(t.begin(), end, [&](double tj) {
    return !detail::inside_window(tj, t[i], window);
  });
  return {static_cast<std::size_t>(begin - t.begin()), static_cast<std::size_t>(end - t.begin())};
}

}  // namespace

double gev_loglik_terms(std::span<const double> data, double xi, double sigma, double mu) {
  const std::size_t n = data.size();
  const auto blocks = static_cast<std::int64_t>((n + kReductionBlock - 1) / kReductionBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);

#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = std::min(n, begin + kReductionBlock);
    partial[static_cast<std::size_t>(b)] = detail::gev_terms_range(data, begin, end, xi, sigma, mu);
  }

  detail::CompensatedSum acc;
  for (double p : partial) {
    if (!std::isfinite(p)) return -std::numeric_limits<double>::infinity();
    acc.add(p);
  }
  return acc.value();
}

void map(std::span<const double> x, std::span<double> out, const ScalarFn& fn) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = fn(x[static_cast<std::size_t>(i)]);
  }
}

double ks_statistic(std::span<const double> cdf_at_sorted) {
  const std::size_t n = cdf_at_sorted.size();
  const auto sn = static_cast<std::int64_t>(n);
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::int64_t i = 0; i < sn; ++i) {
    const auto k = static_cast<std::size_t>(i);
    best = std::fmax(best, detail::ks_point(k, n, cdf_at_sorted[k]));
  }
  return best;
}

void moving_std(std::span<const double> t, std::span<const double> v, double window,
                std::span<double> out) {
  const auto n = static_cast<std::int64_t>(t.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto b = bounds_at(t, k, window);
    out[k] = detail::window_std(v, b.begin, b.end);
  }
}

void window_sum(std::span<const double> t, std::span<const double> w, double window,
                std::span<double> out) {
  const auto n = static_cast<std::int64_t>(t.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto b = bounds_at(t, k, window);
    detail::CompensatedSum acc;
    for (std::size_t j = b.begin; j < b.end; ++j) acc.add(w[j]);
    out[k] = acc.value();
  }
}

}  // namespace voipstat::kernels::parallel
