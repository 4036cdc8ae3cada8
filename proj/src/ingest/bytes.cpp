#include "voipstat/ingest/bytes.hpp"

#include <string>

namespace voipstat::ingest {

void ByteReader::require(std::size_t n) const {
  if (n > remaining()) {
    throw Error(overrun_, "need " + std::to_string(n) + " bytes at offset " + std::to_string(pos_) +
                              ", " + std::to_string(remaining()) + " left");
  }
}

std::uint8_t ByteReader::u8() {
  require(1);
  return data_[pos_++];
}

std::uint16_t ByteReader::u16(Endian e) {
  require(2);
  const std::uint16_t a = data_[pos_];
  const std::uint16_t b = data_[pos_ + 1];
  pos_ += 2;
  return static_cast<std::uint16_t>(e == Endian::Big ? (a << 8) | b : (b << 8) | a);
}

std::uint32_t ByteReader::u32(Endian e) {
  require(4);
  std::uint32_t v = 0;
  if (e == Endian::Big) {
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + static_cast<std::size_t>(i)];
  } else {
    for (int i = 3; i >= 0; --i) v = (v << 8) | data_[pos_ + static_cast<std::size_t>(i)];
  }
  pos_ += 4;
  return v;
}

ByteView ByteReader::take(std::size_t n) {
  require(n);
  auto view = data_.subspan(pos_, n);
  pos_ += n;
  return view;
}

void ByteReader::skip(std::size_t n) {
  require(n);
  pos_ += n;
}

void ByteWriter::u16(std::uint16_t v, Endian e) {
  if (e == Endian::Big) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  } else {
    out_.push_back(static_cast<std::uint8_t>(v));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
}

void ByteWriter::u32(std::uint32_t v, Endian e) {
  if (e == Endian::Big) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  } else {
    for (int shift = 0; shift <= 24; shift += 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorCode::BadInput, "odd-length hex string");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_value(hex[i]);
    const int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::BadInput, "non-hex character in payload");
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace voipstat::ingest
