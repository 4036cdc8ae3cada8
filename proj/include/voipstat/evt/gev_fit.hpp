#pragma once

#include <cstddef>
#include <span>

#include "voipstat/error.hpp"
#include "voipstat/evt/gev.hpp"
#include "voipstat/evt/newton.hpp"

namespace voipstat::evt {

/// Fitting below this sample size is refused.
inline constexpr std::size_t kMinFitPoints = 20;

struct GevFit {
  GevParams params;
  double loglik = 0.0;
  double bic = 0.0;    // 3 ln(n) - 2 loglik
  double e_max = 0.0;  // Kolmogorov-Smirnov distance to the fitted CDF
  Tail tail = Tail::Gumbel;
  Regime regime = Regime::Standard;
  int iterations = 0;
  bool converged = false;
  std::size_t n = 0;
  GevParams initial;
  double initial_loglik = 0.0;
};

/// Raised when the iteration budget runs out; carries the best fit reached.
class NotConvergedError : public Error {
 public:
  explicit NotConvergedError(GevFit best);
  const GevFit& best() const noexcept { return best_; }

 private:
  GevFit best_;
};

/// Gumbel moment start: sigma0 = s sqrt(6) / pi, mu0 = mean - 0.5772 sigma0,
/// xi0 = 0.1, falling back to xi0 = 0 if that leaves a point off-support.
GevParams gev_initial_guess(std::span<const double> data);

/// Gumbel quantile start: sigma0 = IQR / 1.5725, mu0 = median - 0.3665 sigma0.
/// Insensitive to heavy upper tails.
GevParams gev_quantile_guess(std::span<const double> data);

/// Maximum-likelihood GEV fit by damped Newton-Raphson on the log-likelihood
/// with numerically differentiated gradient and Hessian. Steps are halved
/// until every point satisfies 1 + xi (z - mu) / sigma > 0 and the
/// log-likelihood does not decrease.
///
/// Throws `Error(TooFewPoints)` below 20 points, `Error(DegenerateData)` for
/// constant data, and `NotConvergedError` when the step never falls below
/// `options.tol` within `options.max_iter` iterations. The fit starts from the
/// moment guess and restarts from the quantile guess if that does not converge.
GevFit fit_gev_mle(std::span<const double> data, const NewtonOptions& options = {});

/// Fills loglik, bic, e_max, tail and regime for given parameters.
GevFit describe_gev(const GevParams& params, std::span<const double> data);

}  // namespace voipstat::evt
