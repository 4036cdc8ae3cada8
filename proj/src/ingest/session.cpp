#include "voipstat/ingest/session.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "voipstat/error.hpp"

namespace voipstat::ingest {

std::optional<std::uint32_t> CallSession::fwd_ssrc() const {
  if (rtp_fwd.empty()) return std::nullopt;
  return rtp_fwd.front().ssrc;
}

std::optional<std::uint32_t> CallSession::rev_ssrc() const {
  if (rtp_rev.empty()) return std::nullopt;
  return rtp_rev.front().ssrc;
}

namespace {

struct FlowKey {
  std::string src;
  std::uint16_t sport;
  std::string dst;
  std::uint16_t dport;

  FlowKey reversed() const { return {dst, dport, src, sport}; }
  auto operator<=>(const FlowKey&) const = default;
};

struct Stream {
  std::uint32_t ssrc;
  FlowKey flow;
  std::vector<RtpPacket> packets;
  std::vector<std::size_t> indices;
  bool bound = false;
};

struct Dialog {
  std::string call_id;
  std::vector<SipMessage> messages;
  std::set<std::uint16_t> media_ports;
  std::vector<std::size_t> stream_ids;
};

struct RtcpItem {
  std::size_t index;
  FlowKey flow;
  std::uint32_t sender_ssrc;
  std::vector<XrReport> reports;
};

std::string endpoint(const std::string& addr, std::uint16_t port) {
  return addr + ":" + std::to_string(port);
}

std::string ssrc_id(std::uint32_t ssrc) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", ssrc);
  return std::string("ssrc-") + buf;
}

bool in_range(const AssemblyConfig& cfg, const PacketRecord& rec) {
  if (!cfg.rtp_port_range) return true;
  const auto [lo, hi] = *cfg.rtp_port_range;
  return (rec.src_port >= lo && rec.src_port <= hi) || (rec.dst_port >= lo && rec.dst_port <= hi);
}

// Splits a group of streams into fwd (earliest) and its reverse; anything
// else goes to the residue.
void place_streams(std::vector<std::size_t> ids, std::vector<Stream>& streams, CallSession& session,
                   std::vector<ResidueEntry>& residue) {
  std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    return streams[a].packets.front().capture_ts < streams[b].packets.front().capture_ts;
  });
  std::optional<std::size_t> fwd;
  std::optional<std::size_t> rev;
  for (auto id : ids) {
    if (!fwd) {
      fwd = id;
    } else if (!rev && streams[id].flow == streams[*fwd].flow.reversed()) {
      rev = id;
    } else {
      for (auto idx : streams[id].indices) residue.push_back({idx, "extra RTP stream in session"});
    }
  }
  if (fwd) {
    session.rtp_fwd = std::move(streams[*fwd].packets);
    session.fwd_src = endpoint(streams[*fwd].flow.src, streams[*fwd].flow.sport);
    session.fwd_dst = endpoint(streams[*fwd].flow.dst, streams[*fwd].flow.dport);
  }
  if (rev) session.rtp_rev = std::move(streams[*rev].packets);
}

double first_time(const CallSession& s) {
  double t = std::numeric_limits<double>::infinity();
  if (!s.sip_dialog.empty()) t = std::min(t, s.sip_dialog.front().capture_ts);
  if (!s.rtp_fwd.empty()) t = std::min(t, s.rtp_fwd.front().capture_ts);
  if (!s.rtp_rev.empty()) t = std::min(t, s.rtp_rev.front().capture_ts);
  return t;
}

}  // namespace

AssemblyResult assemble_sessions(const std::vector<PacketRecord>& records, const AssemblyConfig& config) {
  AssemblyResult result;
  result.input_packets = records.size();

  std::vector<Dialog> dialogs;
  std::map<std::string, std::size_t> dialog_by_id;
  std::vector<Stream> streams;
  std::map<std::tuple<std::uint32_t, FlowKey>, std::size_t> stream_by_key;
  std::vector<RtcpItem> rtcp;

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const double ts = rec.ts.seconds();
    const ByteView payload(rec.payload);
    const FlowKey flow{rec.src_addr, rec.src_port, rec.dst_addr, rec.dst_port};
    try {
      if (looks_like_sip(payload)) {
        SipMessage msg = parse_sip(payload, ts);
        auto [it, inserted] = dialog_by_id.try_emplace(msg.call_id, dialogs.size());
        if (inserted) dialogs.push_back(Dialog{msg.call_id, {}, {}, {}});
        Dialog& d = dialogs[it->second];
        if (msg.media_port) d.media_ports.insert(*msg.media_port);
        d.messages.push_back(std::move(msg));
      } else if (looks_like_rtcp(payload)) {
        RtcpItem item{i, flow, 0, parse_rtcp_xr_reports(payload, ts)};
        item.sender_ssrc = (static_cast<std::uint32_t>(payload[4]) << 24) |
                           (static_cast<std::uint32_t>(payload[5]) << 16) |
                           (static_cast<std::uint32_t>(payload[6]) << 8) | payload[7];
        rtcp.push_back(std::move(item));
      } else if (!payload.empty() && (payload[0] >> 6) == 2 && in_range(config, rec)) {
        RtpPacket pkt = parse_rtp(payload, ts);
        auto [it, inserted] = stream_by_key.try_emplace({pkt.ssrc, flow}, streams.size());
        if (inserted) streams.push_back(Stream{pkt.ssrc, flow, {}, {}, false});
        streams[it->second].packets.push_back(pkt);
        streams[it->second].indices.push_back(i);
      } else {
        result.residue.push_back({i, "unclassified datagram"});
      }
    } catch (const Error& e) {
      result.residue.push_back({i, e.what()});
    }
  }

  for (auto& s : streams) {
    // Capture files are usually in time order already; keep indices aligned.
    std::vector<std::size_t> order(s.packets.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return s.packets[a].capture_ts < s.packets[b].capture_ts;
    });
    std::vector<RtpPacket> pk;
    std::vector<std::size_t> ix;
    for (auto k : order) {
      pk.push_back(s.packets[k]);
      ix.push_back(s.indices[k]);
    }
    s.packets = std::move(pk);
    s.indices = std::move(ix);
  }

  for (auto& d : dialogs) {
    std::stable_sort(d.messages.begin(), d.messages.end(),
                     [](const SipMessage& a, const SipMessage& b) { return a.capture_ts < b.capture_ts; });
  }

  // Bind each stream to the latest dialog that started before it and
  // negotiated one of its ports.
  for (std::size_t sid = 0; sid < streams.size(); ++sid) {
    const Stream& s = streams[sid];
    const double start = s.packets.front().capture_ts;
    std::optional<std::size_t> best;
    for (std::size_t did = 0; did < dialogs.size(); ++did) {
      const Dialog& d = dialogs[did];
      if (!d.media_ports.contains(s.flow.sport) && !d.media_ports.contains(s.flow.dport)) continue;
      const double d_start = d.messages.front().capture_ts;
      if (!best) {
        best = did;
        continue;
      }
      const double b_start = dialogs[*best].messages.front().capture_ts;
      const bool d_before = d_start <= start;
      const bool b_before = b_start <= start;
      if ((d_before && !b_before) || (d_before && b_before && d_start > b_start)) best = did;
    }
    if (best) {
      dialogs[*best].stream_ids.push_back(sid);
      streams[sid].bound = true;
    }
  }

  for (auto& d : dialogs) {
    CallSession session;
    session.session_id = d.call_id;
    session.scenario_tag = config.scenario_tag;
    session.sip_dialog = std::move(d.messages);
    place_streams(d.stream_ids, streams, session, result.residue);
    result.sessions.push_back(std::move(session));
  }

  // RTP without signalling: pair each stream with its reverse 5-tuple.
  std::vector<bool> grouped(streams.size(), false);
  for (std::size_t sid = 0; sid < streams.size(); ++sid) {
    if (streams[sid].bound || grouped[sid]) continue;
    std::vector<std::size_t> group{sid};
    grouped[sid] = true;
    for (std::size_t other = sid + 1; other < streams.size(); ++other) {
      if (!streams[other].bound && !grouped[other] && streams[other].flow == streams[sid].flow.reversed()) {
        group.push_back(other);
        grouped[other] = true;
        break;
      }
    }
    CallSession session;
    session.session_id = ssrc_id(streams[sid].ssrc);
    session.scenario_tag = config.scenario_tag;
    place_streams(group, streams, session, result.residue);
    result.sessions.push_back(std::move(session));
  }

  for (auto& session : result.sessions) {
    const auto& ref = !session.rtp_fwd.empty() ? session.rtp_fwd : session.rtp_rev;
    if (!ref.empty()) {
      session.codec = config.payload_types.lookup(ref.front().payload_type);
      if (session.codec) session.clock_rate = codec_info(*session.codec).clock_rate_hz;
    }
  }

  auto ssrc_match = [](const CallSession& s, std::uint32_t ssrc) {
    return s.fwd_ssrc() == ssrc || s.rev_ssrc() == ssrc;
  };
  auto port_match = [](const CallSession& s, const FlowKey& flow) {
    auto near = [&](const std::vector<RtpPacket>& list, const std::string& ep) {
      if (list.empty() || ep.empty()) return false;
      const auto colon = ep.rfind(':');
      const int port = std::stoi(ep.substr(colon + 1));
      return flow.sport == port || flow.sport == port + 1 || flow.dport == port || flow.dport == port + 1;
    };
    return near(s.rtp_fwd, s.fwd_src) || near(s.rtp_fwd, s.fwd_dst);
  };
  for (auto& item : rtcp) {
    CallSession* target = nullptr;
    for (auto& s : result.sessions) {
      bool hit = ssrc_match(s, item.sender_ssrc);
      for (const auto& r : item.reports) hit = hit || ssrc_match(s, r.block.source_ssrc);
      if (hit) {
        target = &s;
        break;
      }
    }
    if (!target) {
      for (auto& s : result.sessions) {
        if (port_match(s, item.flow)) {
          target = &s;
          break;
        }
      }
    }
    if (!target) {
      result.residue.push_back({item.index, "RTCP not matched to any session"});
      continue;
    }
    ++target->rtcp_packets;
    for (auto& r : item.reports) target->xr_blocks.push_back(r.block);
  }

  for (auto& s : result.sessions) {
    std::stable_sort(s.xr_blocks.begin(), s.xr_blocks.end(),
                     [](const VoipMetricsBlock& a, const VoipMetricsBlock& b) { return a.report_ts < b.report_ts; });
  }
  std::stable_sort(result.sessions.begin(), result.sessions.end(),
                   [](const CallSession& a, const CallSession& b) { return first_time(a) < first_time(b); });
  std::sort(result.residue.begin(), result.residue.end(),
            [](const ResidueEntry& a, const ResidueEntry& b) { return a.record_index < b.record_index; });
  return result;
}

}  // namespace voipstat::ingest
