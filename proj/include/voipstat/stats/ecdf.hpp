#pragma once

#include <span>
#include <vector>

namespace voipstat::stats {

/// Right-continuous empirical distribution function.
class EmpiricalCdf {
 public:
  /// Throws `Error(EmptyData)`.
  explicit EmpiricalCdf(std::span<const double> data);

  /// Fraction of the sample that is <= x.
  double operator()(double x) const noexcept;

  /// Distinct sorted sample values and the CDF value at each.
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
  std::vector<double> points_;
  std::vector<double> probs_;
};

inline EmpiricalCdf empirical_cdf(std::span<const double> data) { return EmpiricalCdf(data); }

}  // namespace voipstat::stats
