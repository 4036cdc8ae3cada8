#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "voipstat/app/config.hpp"
#include "voipstat/app/export.hpp"
#include "voipstat/ingest/session.hpp"

namespace voipstat::app {

/// Everything produced for one session, before anything touches the disk.
struct SessionOutput {
  std::string dir;  // relative to the output directory
  Json report;
  std::vector<std::pair<std::string, std::string>> files;  // name within `dir`, content
};

/// Runs metrics, descriptive statistics and fits for one session. `index`
/// numbers the session directory; `source` is recorded in the report.
SessionOutput analyze_session(const ingest::CallSession& session, const AnalysisConfig& config, std::size_t index,
                              const std::string& source);

/// Exit codes of `cmd_analyze`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

/// Reads every input, assembles sessions, analyzes them in parallel and
/// writes reports serially. Returns 0 on success, 2 when some packets could
/// not be attributed to a session, 1 on fatal errors (reported on `log`).
int cmd_analyze(const AnalysisConfig& config, std::ostream& log);

}  // namespace voipstat::app
