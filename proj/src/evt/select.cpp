#include "voipstat/evt/select.hpp"

#include <algorithm>
#include <exception>
#include <optional>

#include "voipstat/error.hpp"

namespace voipstat::evt {

ModelSelection select_model(std::span<const double> data, std::span<const Family> candidates) {
  ModelSelection out;
  std::vector<Family> unique;
  for (Family f : candidates) {
    if (std::find(unique.begin(), unique.end(), f) == unique.end()) unique.push_back(f);
  }
  if (unique.empty()) return out;
  if (data.size() < kMinFitPoints) {
    throw Error(ErrorCode::TooFewPoints,
                std::to_string(data.size()) + " points, need at least " + std::to_string(kMinFitPoints));
  }

  // Fitting sorted data makes every family's result independent of input order.
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());

  const int m = static_cast<int>(unique.size());
  std::vector<std::optional<FamilyFit>> fits(unique.size());
  std::vector<std::string> reasons(unique.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < m; ++i) {
    try {
      fits[i] = fit_family(unique[i], sorted);
    } catch (const std::exception& e) {
      reasons[i] = e.what();
    }
  }

  for (std::size_t i = 0; i < unique.size(); ++i) {
    if (fits[i]) {
      out.ranking.push_back(std::move(*fits[i]));
    } else {
      out.excluded.push_back({unique[i], reasons[i]});
    }
  }
  std::sort(out.ranking.begin(), out.ranking.end(), [](const FamilyFit& a, const FamilyFit& b) {
    if (a.bic != b.bic) return a.bic < b.bic;
    if (a.k != b.k) return a.k < b.k;
    return to_string(a.family) < to_string(b.family);
  });
  std::sort(out.excluded.begin(), out.excluded.end(), [](const Exclusion& a, const Exclusion& b) {
    return to_string(a.family) < to_string(b.family);
  });
  return out;
}

}  // namespace voipstat::evt
