#pragma once

#include <vector>

#include "voipstat/ingest/bytes.hpp"
#include "voipstat/ingest/packet.hpp"

namespace voipstat::ingest {

inline constexpr std::uint32_t kPcapMagic = 0xA1B2C3D4;
inline constexpr std::uint32_t kPcapMagicSwapped = 0xD4C3B2A1;

enum class LinkType : std::uint32_t {
  Null = 0,
  Ethernet = 1,
  Raw = 101,
  LinuxSll = 113,
  Ipv4 = 228,
};

/// Decodes a classic capture file. One record per UDP datagram in file order;
/// everything else (ARP, TCP, IPv4 non-first fragments, unknown link types) is
/// skipped. Throws `Error(BadMagic)` or `Error(Truncated)`.
std::vector<PacketRecord> parse_pcap(ByteView file);

struct PcapWriteOptions {
  Endian byte_order = Endian::Little;
  std::uint32_t snaplen = 65535;
};

/// Writes records as Ethernet/IPv4 (or IPv6)/UDP frames. Addresses must be
/// textual IPv4 or IPv6 literals; throws `Error(BadInput)` otherwise.
Bytes write_pcap(const std::vector<PacketRecord>& records, const PcapWriteOptions& options = {});

}  // namespace voipstat::ingest
