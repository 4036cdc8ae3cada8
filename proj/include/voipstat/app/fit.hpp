#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "voipstat/app/config.hpp"
#include "voipstat/app/export.hpp"

namespace voipstat::app {

/// One number per line; blank lines and '#' comments are skipped. A CSV
/// series export (header `t,value,unit`) is also accepted and its value
/// column read. Throws `Error(BadInput)` naming the offending line.
std::vector<double> read_values(std::string_view text);

/// Ranked candidate fits of `values` as a fit report document.
Json fit_report(std::span<const double> values, FitTarget target, std::span<const evt::Family> candidates);

struct FitConfig {
  std::filesystem::path input;
  FitTarget target = FitTarget::Jitter;
  std::vector<evt::Family> candidates = evt::all_families();
  std::optional<std::filesystem::path> out;  // stdout when unset
};

/// Returns 0 on success and 1 on any error (reported on `err`).
int cmd_fit(const FitConfig& config, std::ostream& out, std::ostream& err);

}  // namespace voipstat::app
