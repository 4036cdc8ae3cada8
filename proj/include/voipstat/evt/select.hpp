#pragma once

#include <span>
#include <string>
#include <vector>

#include "voipstat/evt/families.hpp"

namespace voipstat::evt {

struct Exclusion {
  Family family;
  std::string reason;
};

struct ModelSelection {
  std::vector<FamilyFit> ranking;  // best (lowest BIC) first
  std::vector<Exclusion> excluded;
};

/// Fits every candidate and ranks by BIC ascending; ties go to the smaller
/// parameter count, then to the family name. Failed fits are listed under
/// `excluded` instead of aborting. Duplicate candidates are fitted once.
///
/// Throws `Error(TooFewPoints)` below 20 points when candidates are given.
ModelSelection select_model(std::span<const double> data, std::span<const Family> candidates);

}  // namespace voipstat::evt
