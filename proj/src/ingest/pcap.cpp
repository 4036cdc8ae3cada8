#include "voipstat/ingest/pcap.hpp"

#include <arpa/inet.h>

#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace voipstat::ingest {

Timestamp Timestamp::from_seconds(double seconds) {
  if (!std::isfinite(seconds) || seconds < 0.0) {
    throw Error(ErrorCode::BadInput, "timestamp must be finite and non-negative");
  }
  return Timestamp{static_cast<std::int64_t>(std::llround(seconds * 1e6))};
}

namespace {

constexpr std::uint16_t kEtherIpv4 = 0x0800;
constexpr std::uint16_t kEtherIpv6 = 0x86DD;
constexpr std::uint16_t kEtherVlan = 0x8100;
constexpr std::uint16_t kEtherQinQ = 0x88A8;
constexpr std::uint8_t kProtoUdp = 17;

struct Datagram {
  std::string src;
  std::string dst;
  std::uint16_t sport;
  std::uint16_t dport;
  Bytes payload;
};

std::string format_addr(int family, ByteView raw) {
  std::array<char, INET6_ADDRSTRLEN> buf{};
  inet_ntop(family, raw.data(), buf.data(), buf.size());
  return std::string(buf.data());
}

std::optional<Datagram> decode_udp(ByteView segment, std::string src, std::string dst) {
  if (segment.size() < 8) return std::nullopt;
  ByteReader r(segment, ErrorCode::Malformed);
  Datagram d;
  d.src = std::move(src);
  d.dst = std::move(dst);
  d.sport = r.u16();
  d.dport = r.u16();
  const std::uint16_t length = r.u16();
  r.skip(2);
  std::size_t body = r.remaining();
  if (length >= 8) body = std::min<std::size_t>(body, length - 8u);
  auto payload = r.take(body);
  d.payload.assign(payload.begin(), payload.end());
  return d;
}

std::optional<Datagram> decode_ipv4(ByteView packet) {
  if (packet.size() < 20) return std::nullopt;
  const std::size_t ihl = static_cast<std::size_t>(packet[0] & 0x0f) * 4;
  if ((packet[0] >> 4) != 4 || ihl < 20 || ihl > packet.size()) return std::nullopt;
  const std::size_t total = (static_cast<std::size_t>(packet[2]) << 8) | packet[3];
  const std::uint16_t frag = static_cast<std::uint16_t>(((packet[6] & 0x1f) << 8) | packet[7]);
  if (packet[9] != kProtoUdp || frag != 0) return std::nullopt;
  std::size_t end = packet.size();
  if (total >= ihl && total < end) end = total;
  return decode_udp(packet.subspan(ihl, end - ihl), format_addr(AF_INET, packet.subspan(12, 4)),
                    format_addr(AF_INET, packet.subspan(16, 4)));
}

std::optional<Datagram> decode_ipv6(ByteView packet) {
  if (packet.size() < 40 || (packet[0] >> 4) != 6) return std::nullopt;
  // Extension headers are not followed; only a direct UDP next header counts.
  if (packet[6] != kProtoUdp) return std::nullopt;
  const std::size_t payload_len = (static_cast<std::size_t>(packet[4]) << 8) | packet[5];
  std::size_t end = packet.size();
  if (payload_len > 0 && 40 + payload_len < end) end = 40 + payload_len;
  return decode_udp(packet.subspan(40, end - 40), format_addr(AF_INET6, packet.subspan(8, 16)),
                    format_addr(AF_INET6, packet.subspan(24, 16)));
}

std::optional<Datagram> decode_ip(ByteView packet) {
  if (packet.empty()) return std::nullopt;
  switch (packet[0] >> 4) {
    case 4: return decode_ipv4(packet);
    case 6: return decode_ipv6(packet);
    default: return std::nullopt;
  }
}

std::optional<Datagram> decode_ethertype(std::uint16_t type, ByteView rest) {
  while ((type == kEtherVlan || type == kEtherQinQ) && rest.size() >= 4) {
    type = static_cast<std::uint16_t>((rest[2] << 8) | rest[3]);
    rest = rest.subspan(4);
  }
  if (type == kEtherIpv4) return decode_ipv4(rest);
  if (type == kEtherIpv6) return decode_ipv6(rest);
  return std::nullopt;
}

std::optional<Datagram> decode_frame(std::uint32_t linktype, ByteView frame) {
  switch (static_cast<LinkType>(linktype)) {
    case LinkType::Ethernet:
      if (frame.size() < 14) return std::nullopt;
      return decode_ethertype(static_cast<std::uint16_t>((frame[12] << 8) | frame[13]),
                              frame.subspan(14));
    case LinkType::LinuxSll:
      if (frame.size() < 16) return std::nullopt;
      return decode_ethertype(static_cast<std::uint16_t>((frame[14] << 8) | frame[15]),
                              frame.subspan(16));
    case LinkType::Null:
      if (frame.size() < 4) return std::nullopt;
      return decode_ip(frame.subspan(4));
    case LinkType::Raw:
    case LinkType::Ipv4:
      return decode_ip(frame);
  }
  return std::nullopt;
}

}  // namespace

std::vector<PacketRecord> parse_pcap(ByteView file) {
  if (file.size() < 4) throw Error(ErrorCode::BadMagic, "file shorter than the magic number");
  ByteReader r(file, ErrorCode::Truncated);
  const std::uint32_t magic = r.u32(Endian::Little);
  Endian order;
  if (magic == kPcapMagic) {
    order = Endian::Little;
  } else if (magic == kPcapMagicSwapped) {
    order = Endian::Big;
  } else {
    throw Error(ErrorCode::BadMagic, "not a classic pcap file");
  }
  r.skip(2 + 2 + 4 + 4 + 4);  // version, thiszone, sigfigs, snaplen
  const std::uint32_t linktype = r.u32(order);

  std::vector<PacketRecord> records;
  while (!r.empty()) {
    const std::uint32_t sec = r.u32(order);
    const std::uint32_t usec = r.u32(order);
    const std::uint32_t incl_len = r.u32(order);
    r.skip(4);  // orig_len
    const ByteView frame = r.take(incl_len);
    auto datagram = decode_frame(linktype, frame);
    if (!datagram) continue;
    PacketRecord rec;
    rec.ts = Timestamp::from_parts(sec, usec);
    rec.src_addr = std::move(datagram->src);
    rec.dst_addr = std::move(datagram->dst);
    rec.src_port = datagram->sport;
    rec.dst_port = datagram->dport;
    rec.payload = std::move(datagram->payload);
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

std::uint16_t ipv4_checksum(ByteView header) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i + 1 < header.size(); i += 2) {
    sum += static_cast<std::uint32_t>((header[i] << 8) | header[i + 1]);
  }
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum);
}

Bytes build_frame(const PacketRecord& rec) {
  std::array<std::uint8_t, 16> src{};
  std::array<std::uint8_t, 16> dst{};
  const bool v4 = inet_pton(AF_INET, rec.src_addr.c_str(), src.data()) == 1 &&
                  inet_pton(AF_INET, rec.dst_addr.c_str(), dst.data()) == 1;
  const bool v6 = !v4 && inet_pton(AF_INET6, rec.src_addr.c_str(), src.data()) == 1 &&
                  inet_pton(AF_INET6, rec.dst_addr.c_str(), dst.data()) == 1;
  if (!v4 && !v6) {
    throw Error(ErrorCode::BadInput, "cannot encode address pair " + rec.src_addr + " -> " + rec.dst_addr);
  }
  const std::size_t udp_len = 8 + rec.payload.size();
  if (udp_len > 0xffff - 40) throw Error(ErrorCode::BadInput, "payload too large for one datagram");

  ByteWriter w;
  // Locally administered MACs; analysis never looks at them.
  for (std::uint8_t b : {0x02, 0x00, 0x00, 0x00, 0x00, 0x02}) w.u8(b);
  for (std::uint8_t b : {0x02, 0x00, 0x00, 0x00, 0x00, 0x01}) w.u8(b);
  w.u16(v4 ? kEtherIpv4 : kEtherIpv6);

  if (v4) {
    const std::size_t ip_start = w.size();
    w.u8(0x45);
    w.u8(0);
    w.u16(static_cast<std::uint16_t>(20 + udp_len));
    w.u16(0);       // identification
    w.u16(0x4000);  // don't fragment
    w.u8(64);
    w.u8(kProtoUdp);
    w.u16(0);
    w.append(ByteView(src.data(), 4));
    w.append(ByteView(dst.data(), 4));
    const auto csum = ipv4_checksum(ByteView(w.bytes()).subspan(ip_start, 20));
    w.bytes()[ip_start + 10] = static_cast<std::uint8_t>(csum >> 8);
    w.bytes()[ip_start + 11] = static_cast<std::uint8_t>(csum);
  } else {
    w.u32(0x60000000);
    w.u16(static_cast<std::uint16_t>(udp_len));
    w.u8(kProtoUdp);
    w.u8(64);
    w.append(ByteView(src.data(), 16));
    w.append(ByteView(dst.data(), 16));
  }
  w.u16(rec.src_port);
  w.u16(rec.dst_port);
  w.u16(static_cast<std::uint16_t>(udp_len));
  w.u16(0);  // checksum optional over IPv4
  w.append(rec.payload);
  return w.release();
}

}  // namespace

Bytes write_pcap(const std::vector<PacketRecord>& records, const PcapWriteOptions& options) {
  const Endian e = options.byte_order;
  ByteWriter w;
  w.u32(kPcapMagic, e);
  w.u16(2, e);
  w.u16(4, e);
  w.u32(0, e);
  w.u32(0, e);
  w.u32(options.snaplen, e);
  w.u32(static_cast<std::uint32_t>(LinkType::Ethernet), e);
  for (const auto& rec : records) {
    if (rec.ts.micros < 0) throw Error(ErrorCode::BadInput, "negative timestamp");
    const Bytes frame = build_frame(rec);
    w.u32(static_cast<std::uint32_t>(rec.ts.whole_seconds()), e);
    w.u32(static_cast<std::uint32_t>(rec.ts.sub_micros()), e);
    w.u32(static_cast<std::uint32_t>(frame.size()), e);
    w.u32(static_cast<std::uint32_t>(frame.size()), e);
    w.append(frame);
  }
  return w.release();
}

}  // namespace voipstat::ingest
