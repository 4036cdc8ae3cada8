#include "voipstat/evt/gev_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <string>
#include <vector>

#include "voipstat/evt/ks.hpp"

namespace voipstat::evt {

NotConvergedError::NotConvergedError(GevFit best)
    : Error(ErrorCode::NotConverged,
            "GEV fit did not converge in " + std::to_string(best.iterations) + " iterations"),
      best_(best) {}

GevParams gev_initial_guess(std::span<const double> data) {
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (double z : data) mean += z;
  mean /= n;
  double ss = 0.0;
  for (double z : data) ss += (z - mean) * (z - mean);
  const double sd = std::sqrt(ss / std::max(1.0, n - 1.0));

  GevParams p;
  p.sigma = sd * std::sqrt(6.0) / std::numbers::pi;
  p.mu = mean - 0.5772 * p.sigma;
  p.xi = 0.1;
  if (!std::isfinite(gev_loglik(p, data))) p.xi = 0.0;
  return p;
}

GevFit describe_gev(const GevParams& params, std::span<const double> data) {
  GevFit fit;
  fit.params = params;
  fit.n = data.size();
  fit.loglik = gev_loglik(params, data);
  fit.bic = 3.0 * std::log(static_cast<double>(data.size())) - 2.0 * fit.loglik;
  fit.e_max = ks_distance(data, [&](double x) { return gev_cdf(params, x); });
  const auto c = classify(params);
  fit.tail = c.tail;
  fit.regime = c.regime;
  return fit;
}

namespace {

double quantile_sorted(const std::vector<double>& s, double p) {
  const double pos = p * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

GevFit fit_from(std::span<const double> data, const GevParams& start, double spread,
                const NewtonOptions& options) {
  const double scales[] = {1.0, spread, spread};
  auto objective = [&](std::span<const double> theta) {
    return gev_loglik(GevParams{theta[0], theta[1], theta[2]}, data);
  };
  NewtonResult r;
  try {
    r = maximize_newton(objective, {start.xi, start.sigma, start.mu}, scales, options);
  } catch (const Error&) {
    GevFit failed;
    failed.params = start;
    failed.initial = start;
    failed.n = data.size();
    failed.loglik = -std::numeric_limits<double>::infinity();
    failed.initial_loglik = failed.loglik;
    return failed;
  }
  GevFit fit = describe_gev(GevParams{r.theta[0], r.theta[1], r.theta[2]}, data);
  fit.iterations = r.iterations;
  fit.converged = r.converged;
  fit.initial = start;
  fit.initial_loglik = r.initial_value;
  return fit;
}

}  // namespace

GevParams gev_quantile_guess(std::span<const double> data) {
  std::vector<double> s(data.begin(), data.end());
  std::sort(s.begin(), s.end());
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  GevParams p;
  p.sigma = iqr > 0.0 ? iqr / 1.5725 : (s.back() - s.front()) / 4.0;
  p.mu = quantile_sorted(s, 0.5) - 0.3665 * p.sigma;
  p.xi = 0.1;
  if (!std::isfinite(gev_loglik(p, data))) p.xi = 0.0;
  return p;
}

GevFit fit_gev_mle(std::span<const double> data, const NewtonOptions& options) {
  if (data.size() < kMinFitPoints) {
    throw Error(ErrorCode::TooFewPoints,
                std::to_string(data.size()) + " points, need at least " + std::to_string(kMinFitPoints));
  }
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  if (!(*hi > *lo)) throw Error(ErrorCode::DegenerateData, "all values are equal");
  for (double z : data) {
    if (!std::isfinite(z)) throw Error(ErrorCode::BadInput, "non-finite value in sample");
  }

  // Heavy tails inflate the sample variance, which can leave the moment
  // start far from the optimum; the quantile start is the fallback.
  const GevParams robust = gev_quantile_guess(data);
  GevFit fit = fit_from(data, gev_initial_guess(data), robust.sigma, options);
  if (!fit.converged) {
    GevFit retry = fit_from(data, robust, robust.sigma, options);
    if (retry.converged || retry.loglik > fit.loglik) fit = retry;
  }
  if (!fit.converged) throw NotConvergedError(fit);
  return fit;
}

}  // namespace voipstat::evt
