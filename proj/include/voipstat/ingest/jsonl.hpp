#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "voipstat/ingest/packet.hpp"

namespace voipstat::ingest {

// Line-delimited JSON records, one datagram per line:
//   {"ts":100.5,"src":"10.0.0.1","dst":"10.0.0.2","sport":5004,"dport":5006,
//    "proto":"udp","payload_hex":"8000..."}
// Blank lines and lines starting with '#' are ignored; records whose proto is
// not "udp" are skipped, mirroring the pcap reader.

/// Throws `Error(BadInput)` naming the offending line.
std::vector<PacketRecord> parse_jsonl(std::string_view text);

std::string write_jsonl(const std::vector<PacketRecord>& records);

}  // namespace voipstat::ingest
