#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "voipstat/kernels/kernels.hpp"

namespace voipstat::kernels::detail {

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

// Loglik contribution of data[begin, end); -inf when a point is off-support.
inline double gev_terms_range(std::span<const double> data, std::size_t begin, std::size_t end,
                              double xi, double sigma, double mu) noexcept {
  CompensatedSum acc;
  for (std::size_t i = begin; i < end; ++i) {
    const double omega = gev_omega(xi, (data[i] - mu) / sigma);
    if (!std::isfinite(omega)) return -std::numeric_limits<double>::infinity();
    const double term = -(1.0 + xi) * omega - std::exp(-omega);
    if (!std::isfinite(term)) return -std::numeric_limits<double>::infinity();
    acc.add(term);
  }
  return acc.value();
}

inline double ks_point(std::size_t i, std::size_t n, double f) noexcept {
  const double upper = static_cast<double>(i + 1) / static_cast<double>(n);
  const double lower = static_cast<double>(i) / static_cast<double>(n);
  return std::fmax(std::fabs(upper - f), std::fabs(lower - f));
}

inline double window_std(std::span<const double> v, std::size_t begin, std::size_t end) noexcept {
  const std::size_t count = end - begin;
  if (count < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t j = begin; j < end; ++j) mean += v[j];
  mean /= static_cast<double>(count);
  double ss = 0.0;
  for (std::size_t j = begin; j < end; ++j) {
    const double d = v[j] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(count - 1));
}

inline bool inside_window(double tj, double ti, double window) noexcept {
  return tj > ti - window + kWindowEdgeTolerance;
}

}  // namespace voipstat::kernels::detail
