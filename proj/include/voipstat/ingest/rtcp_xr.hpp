#pragma once

#include <cstdint>
#include <vector>

#include "voipstat/ingest/bytes.hpp"

namespace voipstat::ingest {

inline constexpr std::uint8_t kRtcpXrPacketType = 207;
inline constexpr std::uint8_t kVoipMetricsBlockType = 7;
inline constexpr std::uint8_t kRFactorUnavailable = 127;
inline constexpr std::uint16_t kDelayUnavailable = 0xffff;

/// VoIP Metrics report block of an RTCP extended report. The wire body is the
/// source SSRC followed by seven words of metrics (block_length = 8). A block
/// declaring block_length 7 is accepted as well; the jitter-buffer maximum
/// fields it cannot carry decode as 0.
struct VoipMetricsBlock {
  std::uint8_t block_type = kVoipMetricsBlockType;
  std::uint16_t block_length = 8;
  std::uint32_t source_ssrc = 0;
  std::uint8_t loss_rate = 0;
  std::uint8_t discard_rate = 0;
  std::uint8_t burst_density = 0;
  std::uint8_t gap_density = 0;
  std::uint16_t burst_duration = 0;
  std::uint16_t gap_duration = 0;
  std::uint16_t round_trip_delay = 0;  // ms
  std::uint16_t end_system_delay = 0;  // ms
  std::int8_t signal_level = 0;        // dB relative to 0 dBm0
  std::int8_t noise_level = 0;
  std::uint8_t rerl = 0;
  std::uint8_t gmin = 0;
  std::uint8_t r_factor = kRFactorUnavailable;
  std::uint8_t ext_r_factor = kRFactorUnavailable;
  std::uint8_t mos_lq = 127;
  std::uint8_t mos_cq = 127;
  std::uint8_t rx_config = 0;
  std::uint16_t jb_nominal = 0;
  std::uint16_t jb_maximum = 0;
  std::uint16_t jb_abs_max = 0;
  double report_ts = 0.0;  // capture time of the enclosing packet, seconds

  bool operator==(const VoipMetricsBlock&) const = default;
};

/// One VoIP metrics block of a decoded XR packet together with the SSRC of
/// the reporting endpoint.
struct XrReport {
  std::uint32_t reporter_ssrc = 0;
  VoipMetricsBlock block;
};

/// All VoIP metrics blocks in an RTCP compound packet, in wire order. Other
/// RTCP packet types and other XR block types are skipped. Throws
/// `Error(Truncated)` when a declared length runs past the buffer and
/// `Error(Malformed)` for a VoIP block shorter than seven words.
std::vector<VoipMetricsBlock> parse_rtcp_xr(ByteView payload, double capture_ts);
std::vector<XrReport> parse_rtcp_xr_reports(ByteView payload, double capture_ts);

/// True if the datagram looks like RTCP (version 2, packet type 192..223).
bool looks_like_rtcp(ByteView payload) noexcept;

/// Block header plus eight body words, big-endian.
Bytes encode_voip_metrics_block(const VoipMetricsBlock& block);

/// A complete XR packet (packet type 207) carrying the given blocks.
Bytes encode_rtcp_xr(std::uint32_t reporter_ssrc, const std::vector<VoipMetricsBlock>& blocks);

}  // namespace voipstat::ingest
