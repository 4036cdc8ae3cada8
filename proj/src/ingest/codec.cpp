#include "voipstat/ingest/codec.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <nlohmann/json.hpp>
#include <string>

#include "voipstat/error.hpp"

namespace voipstat::ingest {

namespace {

// Clock rates are RTP timestamp clocks, not audio sample rates: G.722
// samples at 16 kHz but its RTP clock is 8 kHz for historical reasons.
constexpr std::array<CodecInfo, 8> kCodecs{{
    {Codec::G711A, "G711-A", "PCM", 64.0, 64.0, 8000},
    {Codec::G722, "G722", "ADPCM", 64.0, 64.0, 8000},
    {Codec::G729, "G729", "CS-ACELP", 8.0, 8.0, 8000},
    {Codec::GSM, "GSM", "RPE-LTP", 8.0, 8.0, 8000},
    {Codec::SPX8, "SPX-8", "CELP", 8.0, 8.0, 8000},
    {Codec::SPX16, "SPX-16", "CELP", 16.0, 16.0, 16000},
    {Codec::OPUS, "OPUS", "LP-MDCT", 6.0, 128.0, 48000},
    {Codec::MPEG4_16, "MPEG4-16", "CELP", 16.0, 16.0, 16000},
}};

std::string normalize(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_' || c == '.' || c == ' ' || c == '(' || c == ')') continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::span<const CodecInfo> codec_table() noexcept { return kCodecs; }

const CodecInfo& codec_info(Codec codec) noexcept {
  return kCodecs[static_cast<std::size_t>(codec)];
}

std::string_view codec_name(Codec codec) noexcept { return codec_info(codec).name; }

std::optional<Codec> codec_from_name(std::string_view name) {
  const std::string key = normalize(name);
  static const std::array<std::pair<std::string_view, Codec>, 22> kAliases{{
      {"G711A", Codec::G711A},     {"G711", Codec::G711A},       {"PCMA", Codec::G711A},
      {"G711ALAW", Codec::G711A},  {"G722", Codec::G722},        {"G729", Codec::G729},
      {"G729A", Codec::G729},      {"GSM", Codec::GSM},          {"SPX8", Codec::SPX8},
      {"SPEEX8", Codec::SPX8},     {"SPEEX", Codec::SPX8},       {"SPX16", Codec::SPX16},
      {"SPEEX16", Codec::SPX16},   {"OPUS", Codec::OPUS},        {"MPEG416", Codec::MPEG4_16},
      {"MPEG16", Codec::MPEG4_16}, {"AACMPEG416", Codec::MPEG4_16}, {"MPEG4", Codec::MPEG4_16},
      {"AAC", Codec::MPEG4_16},    {"MP4AAC", Codec::MPEG4_16},  {"MP4ALATM", Codec::MPEG4_16},
      {"SPEEXWB", Codec::SPX16},
  }};
  for (const auto& [alias, codec] : kAliases) {
    if (alias == key) return codec;
  }
  return std::nullopt;
}

PayloadTypeMap PayloadTypeMap::defaults() {
  PayloadTypeMap m;
  m.set(3, Codec::GSM);
  m.set(8, Codec::G711A);
  m.set(9, Codec::G722);
  m.set(18, Codec::G729);
  return m;
}

void PayloadTypeMap::merge_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("codec map: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::BadInput, "codec map must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    int pt = -1;
    try {
      std::size_t used = 0;
      pt = std::stoi(key, &used);
      if (used != key.size()) pt = -1;
    } catch (const std::exception&) {
      pt = -1;
    }
    if (pt < 0 || pt > 127) throw Error(ErrorCode::BadInput, "codec map: bad payload type '" + key + "'");
    if (!value.is_string()) throw Error(ErrorCode::BadInput, "codec map: value for " + key + " must be a string");
    const auto codec = codec_from_name(value.get<std::string>());
    if (!codec) throw Error(ErrorCode::BadInput, "codec map: unknown codec '" + value.get<std::string>() + "'");
    set(static_cast<std::uint8_t>(pt), *codec);
  }
}

std::optional<Codec> PayloadTypeMap::lookup(std::uint8_t payload_type) const {
  auto it = map_.find(payload_type);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

}  // namespace voipstat::ingest
