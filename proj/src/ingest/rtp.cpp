#include "voipstat/ingest/rtp.hpp"

namespace voipstat::ingest {

RtpPacket parse_rtp(ByteView payload, double capture_ts) {
  if (payload.size() < 12) throw Error(ErrorCode::TooShort, "RTP header needs 12 bytes");
  ByteReader r(payload, ErrorCode::TooShort);
  const std::uint8_t b0 = r.u8();
  const std::uint8_t b1 = r.u8();

  RtpPacket p;
  p.version = static_cast<std::uint8_t>(b0 >> 6);
  if (p.version != 2) throw Error(ErrorCode::BadVersion, "RTP version " + std::to_string(p.version));
  const bool padding = (b0 & 0x20) != 0;
  const bool extension = (b0 & 0x10) != 0;
  const std::size_t csrc_count = b0 & 0x0f;
  p.marker = (b1 & 0x80) != 0;
  p.payload_type = static_cast<std::uint8_t>(b1 & 0x7f);
  p.seq = r.u16();
  p.rtp_ts = r.u32();
  p.ssrc = r.u32();
  r.skip(4 * csrc_count);
  if (extension) {
    r.skip(2);
    const std::size_t words = r.u16();
    r.skip(4 * words);
  }
  p.header_len = r.position();
  std::size_t pad = 0;
  if (padding && r.remaining() > 0) {
    pad = payload.back();
    if (pad > r.remaining()) throw Error(ErrorCode::TooShort, "RTP padding exceeds payload");
  }
  p.payload_len = r.remaining() - pad;
  p.capture_ts = capture_ts;
  return p;
}

Bytes encode_rtp(const RtpPacket& packet, std::uint8_t fill) {
  ByteWriter w;
  w.u8(0x80);
  w.u8(static_cast<std::uint8_t>((packet.marker ? 0x80 : 0x00) | (packet.payload_type & 0x7f)));
  w.u16(packet.seq);
  w.u32(packet.rtp_ts);
  w.u32(packet.ssrc);
  auto& out = w.bytes();
  out.insert(out.end(), packet.payload_len, fill);
  return w.release();
}

}  // namespace voipstat::ingest
