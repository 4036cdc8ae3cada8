#pragma once

#include <cstdint>

#include "voipstat/ingest/bytes.hpp"

namespace voipstat::ingest {

struct RtpPacket {
  std::uint8_t version = 2;
  bool marker = false;
  std::uint8_t payload_type = 0;
  std::uint16_t seq = 0;
  std::uint32_t rtp_ts = 0;
  std::uint32_t ssrc = 0;
  std::size_t header_len = 12;  // fixed header + CSRC list + extension
  std::size_t payload_len = 0;  // excludes header and padding
  double capture_ts = 0.0;      // seconds

  bool operator==(const RtpPacket&) const = default;
};

/// Throws `Error(TooShort)` below 12 bytes or when the CSRC/extension/padding
/// lengths overrun the buffer, `Error(BadVersion)` unless version is 2.
RtpPacket parse_rtp(ByteView payload, double capture_ts);

/// Serializes the fixed header followed by `payload_len` filler bytes.
Bytes encode_rtp(const RtpPacket& packet, std::uint8_t fill = 0xd5);

}  // namespace voipstat::ingest
