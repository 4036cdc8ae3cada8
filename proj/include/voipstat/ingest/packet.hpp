#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "voipstat/ingest/bytes.hpp"

namespace voipstat::ingest {

/// Capture time with the microsecond resolution of classic pcap.
struct Timestamp {
  std::int64_t micros = 0;

  static Timestamp from_parts(std::int64_t sec, std::int64_t usec) noexcept {
    return Timestamp{sec * 1'000'000 + usec};
  }
  /// Rounds to the nearest microsecond.
  static Timestamp from_seconds(double seconds);

  double seconds() const noexcept { return static_cast<double>(micros) * 1e-6; }
  std::int64_t whole_seconds() const noexcept { return micros / 1'000'000; }
  std::int64_t sub_micros() const noexcept { return micros % 1'000'000; }

  auto operator<=>(const Timestamp&) const = default;
};

/// One captured UDP datagram.
struct PacketRecord {
  Timestamp ts;
  std::string src_addr;
  std::string dst_addr;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  Bytes payload;

  bool operator==(const PacketRecord&) const = default;
};

}  // namespace voipstat::ingest
