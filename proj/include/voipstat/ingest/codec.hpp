#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace voipstat::ingest {

enum class Codec { G711A, G722, G729, GSM, SPX8, SPX16, OPUS, MPEG4_16 };

struct CodecInfo {
  Codec codec;
  std::string_view name;
  std::string_view algorithm;
  double bitrate_min_kbps;
  double bitrate_max_kbps;  // equal to min except for variable-rate codecs
  std::uint32_t clock_rate_hz;
};

/// The eight codecs of the measurement campaign with their nominal rates.
std::span<const CodecInfo> codec_table() noexcept;
const CodecInfo& codec_info(Codec codec) noexcept;
std::string_view codec_name(Codec codec) noexcept;

/// Accepts canonical names plus common spellings ("PCMA", "G.722", "speex-16",
/// "MPEG-16", ...), case-insensitively.
std::optional<Codec> codec_from_name(std::string_view name);

/// RTP payload-type number to codec. Defaults cover the static assignments
/// 8 (a-law), 9 (G722), 18 (G729) and 3 (GSM); dynamic types are added per
/// capture from a JSON map such as {"96": "OPUS", "97": "SPX-16"}.
class PayloadTypeMap {
 public:
  static PayloadTypeMap defaults();
  /// Overlays entries from a JSON object onto this map. Throws `Error(BadInput)`.
  void merge_json(std::string_view text);

  void set(std::uint8_t payload_type, Codec codec) { map_[payload_type] = codec; }
  std::optional<Codec> lookup(std::uint8_t payload_type) const;
  const std::map<std::uint8_t, Codec>& entries() const noexcept { return map_; }

 private:
  std::map<std::uint8_t, Codec> map_;
};

}  // namespace voipstat::ingest
