#include "voipstat/stats/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voipstat/error.hpp"

namespace voipstat::stats {

namespace {

struct Axis {
  std::vector<double> edges;
  double lo = 0.0;
  double width = 0.0;
  std::size_t bins = 1;

  std::size_t index(double v) const noexcept {
    if (bins == 1) return 0;
    const auto i = static_cast<std::size_t>(std::floor((v - lo) / width));
    return std::min(i, bins - 1);
  }
};

Axis make_axis(std::span<const double> v, std::size_t bins) {
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  Axis a;
  a.lo = *mn;
  if (!(*mx > *mn)) {
    a.edges = {*mn, *mx};
    return a;
  }
  a.bins = bins;
  a.width = (*mx - *mn) / static_cast<double>(bins);
  a.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) a.edges[i] = *mn + a.width * static_cast<double>(i);
  a.edges.back() = *mx;
  return a;
}

}  // namespace

BivariateHist bivariate_hist(std::span<const double> x, std::span<const double> y, std::size_t nx,
                             std::size_t ny) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(x.size()) + " x values vs " + std::to_string(y.size()) + " y values");
  }
  if (x.empty()) throw Error(ErrorCode::EmptyData, "histogram of no points");
  if (nx == 0 || ny == 0) throw Error(ErrorCode::BadInput, "bin counts must be positive");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error(ErrorCode::BadInput, "non-finite value");
  }

  const Axis ax = make_axis(x, nx);
  const Axis ay = make_axis(y, ny);
  BivariateHist h;
  h.x_edges = ax.edges;
  h.y_edges = ay.edges;
  h.counts.assign(ax.bins, std::vector<std::uint64_t>(ay.bins, 0));
  for (std::size_t i = 0; i < x.size(); ++i) ++h.counts[ax.index(x[i])][ay.index(y[i])];

  const double total = static_cast<double>(x.size());
  h.density.assign(ax.bins, std::vector<double>(ay.bins, 0.0));
  for (std::size_t i = 0; i < ax.bins; ++i) {
    for (std::size_t j = 0; j < ay.bins; ++j) h.density[i][j] = static_cast<double>(h.counts[i][j]) / total;
  }
  return h;
}

}  // namespace voipstat::stats
