#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voipstat/evt/families.hpp"
#include "voipstat/ingest/codec.hpp"
#include "voipstat/ingest/packet.hpp"

namespace voipstat::app {

enum class InputFormat { Pcap, Jsonl };
enum class FitTarget { Jitter, Rtt };
/// Which XR reports feed the RTT, R-Factor and signal-level series: those
/// about the forward stream, the reverse stream, or all of them.
enum class XrSource { All, Fwd, Rev };
/// Jitter fit input: the moving standard deviation or the raw J_n values.
enum class JitterInput { Sigma, Raw };

std::string_view to_string(InputFormat f) noexcept;
std::string_view to_string(FitTarget t) noexcept;
std::string_view to_string(XrSource s) noexcept;
std::string_view to_string(JitterInput j) noexcept;

/// Parsers for the flag values above; all throw `Error(BadInput)`.
InputFormat parse_format(std::string_view s);
FitTarget parse_target(std::string_view s);
std::vector<FitTarget> parse_targets(std::string_view list);
XrSource parse_xr_source(std::string_view s);
JitterInput parse_jitter_input(std::string_view s);

struct AnalysisConfig {
  std::vector<std::filesystem::path> inputs;
  std::optional<InputFormat> format;  // from the file extension when unset
  std::optional<std::filesystem::path> codecs_map;
  double sigma_window = 1.0;  // seconds
  double bw_window = 1.0;     // seconds
  std::size_t overhead_bytes = 28;
  std::string scenario_tag;
  std::vector<FitTarget> fit_targets{FitTarget::Jitter, FitTarget::Rtt};
  std::vector<evt::Family> candidates = evt::all_families();
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::size_t hist_bins = 30;
  JitterInput jitter_input = JitterInput::Sigma;
  XrSource xr_source = XrSource::All;

  /// Throws `Error(BadInput)` for non-positive windows, zero bins or no inputs.
  void validate() const;
};

/// Whole-file I/O; failures throw `Error(Io)`.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// ".jsonl"/".json"/".ndjson" select JSONL, anything else pcap.
InputFormat detect_format(const std::filesystem::path& path);

std::vector<ingest::PacketRecord> load_records(const std::filesystem::path& path, InputFormat format);

ingest::PayloadTypeMap load_payload_types(const std::optional<std::filesystem::path>& codecs_map);

}  // namespace voipstat::app
