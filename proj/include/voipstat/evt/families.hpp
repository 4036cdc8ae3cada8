#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voipstat/evt/gev_fit.hpp"

namespace voipstat::evt {

enum class Family {
  GEV,
  Gumbel,
  Weibull,
  Normal,
  LogNormal,
  Exponential,
  Gamma,
  Logistic,
  GeneralizedPareto,
  Rayleigh,
};

std::string_view to_string(Family family) noexcept;
/// Accepts the names above, case-insensitively. Throws `Error(BadInput)`.
Family family_from_string(std::string_view name);
/// Parses a comma-separated list; "all" selects every family.
std::vector<Family> parse_family_list(std::string_view list);
const std::vector<Family>& all_families();

/// Number of free parameters used in the BIC penalty.
int parameter_count(Family family) noexcept;
/// Names of the entries of `FamilyFit::params`, in order.
std::span<const std::string_view> parameter_names(Family family) noexcept;

/// Families whose support is the positive half-line; they reject data <= 0.
bool requires_positive(Family family) noexcept;

struct FamilyFit {
  Family family = Family::GEV;
  int k = 0;
  std::vector<double> params;
  double loglik = 0.0;
  double bic = 0.0;  // k ln(n) - 2 loglik
  double e_max = 0.0;
  std::size_t n = 0;
  int iterations = 0;
  bool converged = true;
  std::optional<GevFit> gev;  // set for the GEV family
};

/// Maximum-likelihood fit of one family. Closed forms where they exist,
/// one-dimensional root finding for Gumbel, Weibull and Gamma, Newton ascent
/// for Logistic and the generalized Pareto (threshold fixed at min(data)).
///
/// Throws `Error(TooFewPoints)`, `Error(DegenerateData)`,
/// `Error(DomainError)` for data outside the family's support, or
/// `NotConvergedError` / `Error(NotConverged)` when an iterative fit stalls.
FamilyFit fit_family(Family family, std::span<const double> data);

/// Fitted distribution function, for goodness-of-fit.
double family_cdf(const FamilyFit& fit, double x);

}  // namespace voipstat::evt
