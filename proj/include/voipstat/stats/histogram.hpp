#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace voipstat::stats {

inline constexpr std::size_t kDefaultHistBins = 30;

struct BivariateHist {
  std::vector<double> x_edges;  // nx + 1 values, or 2 equal values for a degenerate axis
  std::vector<double> y_edges;
  std::vector<std::vector<std::uint64_t>> counts;  // counts[ix][iy]
  std::vector<std::vector<double>> density;        // counts / total

  std::size_t nx() const noexcept { return counts.size(); }
  std::size_t ny() const noexcept { return counts.empty() ? 0 : counts.front().size(); }
};

/// Equal-width bins over [min, max] of each axis. Every bin is half-open
/// except the last, which also holds the maximum. An axis whose values are
/// all equal gets a single bin.
///
/// Throws `Error(LengthMismatch)` when |x| != |y|, `Error(EmptyData)` for no
/// points, `Error(BadInput)` for zero bins or non-finite values.
BivariateHist bivariate_hist(std::span<const double> x, std::span<const double> y,
                             std::size_t nx = kDefaultHistBins, std::size_t ny = kDefaultHistBins);

}  // namespace voipstat::stats
