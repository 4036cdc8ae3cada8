#include "voipstat/ingest/rtcp_xr.hpp"

#include <string>

#include "voipstat/error.hpp"

namespace voipstat::ingest {

namespace {

VoipMetricsBlock decode_voip_block(ByteView body, std::uint16_t block_length, double capture_ts) {
  if (block_length < 7) {
    throw Error(ErrorCode::Malformed,
                "VoIP metrics block_length " + std::to_string(block_length) + " < 7");
  }
  ByteReader r(body, ErrorCode::Truncated);
  VoipMetricsBlock b;
  b.block_length = block_length;
  b.source_ssrc = r.u32();
  b.loss_rate = r.u8();
  b.discard_rate = r.u8();
  b.burst_density = r.u8();
  b.gap_density = r.u8();
  b.burst_duration = r.u16();
  b.gap_duration = r.u16();
  b.round_trip_delay = r.u16();
  b.end_system_delay = r.u16();
  b.signal_level = static_cast<std::int8_t>(r.u8());
  b.noise_level = static_cast<std::int8_t>(r.u8());
  b.rerl = r.u8();
  b.gmin = r.u8();
  b.r_factor = r.u8();
  b.ext_r_factor = r.u8();
  b.mos_lq = r.u8();
  b.mos_cq = r.u8();
  b.rx_config = r.u8();
  r.skip(1);
  b.jb_nominal = r.u16();
  if (block_length >= 8) {
    b.jb_maximum = r.u16();
    b.jb_abs_max = r.u16();
  }
  b.report_ts = capture_ts;
  return b;
}

void parse_xr_packet(ByteView packet, double capture_ts, std::vector<XrReport>& out) {
  ByteReader r(packet, ErrorCode::Truncated);
  r.skip(4);
  const std::uint32_t reporter = r.u32();
  while (r.remaining() >= 4) {
    const std::uint8_t block_type = r.u8();
    r.skip(1);
    const std::uint16_t block_length = r.u16();
    const ByteView body = r.take(4u * block_length);
    if (block_type == kVoipMetricsBlockType) {
      out.push_back({reporter, decode_voip_block(body, block_length, capture_ts)});
    }
  }
}

}  // namespace

bool looks_like_rtcp(ByteView payload) noexcept {
  return payload.size() >= 8 && (payload[0] >> 6) == 2 && payload[1] >= 192 && payload[1] <= 223;
}

std::vector<XrReport> parse_rtcp_xr_reports(ByteView payload, double capture_ts) {
  std::vector<XrReport> out;
  ByteReader r(payload, ErrorCode::Truncated);
  while (r.remaining() >= 4) {
    const std::size_t start = r.position();
    const std::uint8_t b0 = r.u8();
    const std::uint8_t packet_type = r.u8();
    const std::uint16_t length_words = r.u16();
    if ((b0 >> 6) != 2) throw Error(ErrorCode::BadVersion, "RTCP version " + std::to_string(b0 >> 6));
    const std::size_t total = 4u * (static_cast<std::size_t>(length_words) + 1u);
    r.skip(total - 4);
    if (packet_type == kRtcpXrPacketType) {
      parse_xr_packet(payload.subspan(start, total), capture_ts, out);
    }
  }
  return out;
}

std::vector<VoipMetricsBlock> parse_rtcp_xr(ByteView payload, double capture_ts) {
  std::vector<VoipMetricsBlock> blocks;
  for (auto& report : parse_rtcp_xr_reports(payload, capture_ts)) blocks.push_back(report.block);
  return blocks;
}

Bytes encode_voip_metrics_block(const VoipMetricsBlock& b) {
  ByteWriter w;
  w.u8(kVoipMetricsBlockType);
  w.u8(0);
  w.u16(8);
  w.u32(b.source_ssrc);
  w.u8(b.loss_rate);
  w.u8(b.discard_rate);
  w.u8(b.burst_density);
  w.u8(b.gap_density);
  w.u16(b.burst_duration);
  w.u16(b.gap_duration);
  w.u16(b.round_trip_delay);
  w.u16(b.end_system_delay);
  w.u8(static_cast<std::uint8_t>(b.signal_level));
  w.u8(static_cast<std::uint8_t>(b.noise_level));
  w.u8(b.rerl);
  w.u8(b.gmin);
  w.u8(b.r_factor);
  w.u8(b.ext_r_factor);
  w.u8(b.mos_lq);
  w.u8(b.mos_cq);
  w.u8(b.rx_config);
  w.u8(0);
  w.u16(b.jb_nominal);
  w.u16(b.jb_maximum);
  w.u16(b.jb_abs_max);
  return w.release();
}

Bytes encode_rtcp_xr(std::uint32_t reporter_ssrc, const std::vector<VoipMetricsBlock>& blocks) {
  ByteWriter w;
  const std::size_t words = 1 + 9 * blocks.size();  // SSRC + blocks, excluding the header word
  w.u8(0x80);
  w.u8(kRtcpXrPacketType);
  w.u16(static_cast<std::uint16_t>(words));
  w.u32(reporter_ssrc);
  for (const auto& b : blocks) w.append(encode_voip_metrics_block(b));
  return w.release();
}

}  // namespace voipstat::ingest
