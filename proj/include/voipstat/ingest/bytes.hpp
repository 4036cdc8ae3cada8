#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "voipstat/error.hpp"

namespace voipstat::ingest {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class Endian { Big, Little };

/// Bounds-checked cursor over a byte buffer. Every read past the end throws
/// `Error` with the code given at construction.
class ByteReader {
 public:
  explicit ByteReader(ByteView data, ErrorCode overrun = ErrorCode::Truncated) noexcept
      : data_(data), overrun_(overrun) {}

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  bool empty() const noexcept { return pos_ >= data_.size(); }

  std::uint8_t u8();
  std::uint16_t u16(Endian e = Endian::Big);
  std::uint32_t u32(Endian e = Endian::Big);
  ByteView take(std::size_t n);
  void skip(std::size_t n);

 private:
  void require(std::size_t n) const;

  ByteView data_;
  std::size_t pos_ = 0;
  ErrorCode overrun_;
};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v, Endian e = Endian::Big);
  void u32(std::uint32_t v, Endian e = Endian::Big);
  void append(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
  void append(std::string_view text) { out_.insert(out_.end(), text.begin(), text.end()); }

  std::size_t size() const noexcept { return out_.size(); }
  Bytes& bytes() noexcept { return out_; }
  Bytes release() noexcept { return std::move(out_); }

 private:
  Bytes out_;
};

std::string to_hex(ByteView bytes);
/// Throws `Error(BadInput)` on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

}  // namespace voipstat::ingest
