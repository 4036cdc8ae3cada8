#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voipstat/ingest/codec.hpp"
#include "voipstat/ingest/packet.hpp"
#include "voipstat/ingest/rtcp_xr.hpp"
#include "voipstat/ingest/rtp.hpp"
#include "voipstat/ingest/sip.hpp"

namespace voipstat::ingest {

/// An assembled bidirectional call. `rtp_fwd` is the stream seen first, `rtp_rev`
/// the stream on the reversed 5-tuple. Both lists are ordered by capture time
/// and each holds a single SSRC.
struct CallSession {
  std::string session_id;
  std::optional<Codec> codec;
  std::uint32_t clock_rate = 0;  // Hz, 0 when the codec is unknown
  std::vector<RtpPacket> rtp_fwd;
  std::vector<RtpPacket> rtp_rev;
  std::vector<VoipMetricsBlock> xr_blocks;  // ordered by report_ts
  std::vector<SipMessage> sip_dialog;       // ordered by capture_ts
  std::string scenario_tag;
  std::string fwd_src;  // "addr:port"
  std::string fwd_dst;
  std::size_t rtcp_packets = 0;

  std::optional<std::uint32_t> fwd_ssrc() const;
  std::optional<std::uint32_t> rev_ssrc() const;
  std::size_t packet_count() const noexcept {
    return rtp_fwd.size() + rtp_rev.size() + sip_dialog.size() + rtcp_packets;
  }
};

struct AssemblyConfig {
  PayloadTypeMap payload_types = PayloadTypeMap::defaults();
  std::string scenario_tag;
  /// When set, only datagrams with a port in [first, second] are treated as RTP.
  std::optional<std::pair<std::uint16_t, std::uint16_t>> rtp_port_range;
};

struct ResidueEntry {
  std::size_t record_index;
  std::string reason;
};

struct AssemblyResult {
  std::vector<CallSession> sessions;
  std::vector<ResidueEntry> residue;  // ordered by record index
  std::size_t input_packets = 0;
};

/// Groups RTP by (SSRC, 5-tuple) and SIP by Call-ID, binds RTP streams to the
/// dialog whose SDP media ports they use, attaches RTCP-XR reports by SSRC
/// (falling back to ports), and resolves the codec from the payload type.
/// Every input record ends up in exactly one session or in the residue.
AssemblyResult assemble_sessions(const std::vector<PacketRecord>& records, const AssemblyConfig& config);

}  // namespace voipstat::ingest
