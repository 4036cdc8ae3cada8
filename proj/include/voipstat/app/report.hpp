#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "voipstat/app/export.hpp"

namespace voipstat::app {

/// Session reports found under `inputs`: report files are taken as given,
/// directories are searched recursively for report.json. Sorted by path.
std::vector<std::filesystem::path> find_reports(std::span<const std::filesystem::path> inputs);

/// Per-scenario comparison table: CSD and SDD boxplots across sessions,
/// distribution of per-session sigma_J and RTT means, and loss by codec.
Json compare_reports(std::span<const Json> reports);

struct ReportConfig {
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> out;  // stdout when unset
};

/// Returns 0 on success, 1 on error (reported on `err`).
int cmd_report(const ReportConfig& config, std::ostream& out, std::ostream& err);

}  // namespace voipstat::app
