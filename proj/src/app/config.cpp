#include "voipstat/app/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "voipstat/error.hpp"
#include "voipstat/ingest/jsonl.hpp"
#include "voipstat/ingest/pcap.hpp"

namespace voipstat::app {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_list(std::string_view list) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : list) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

std::string_view to_string(InputFormat f) noexcept { return f == InputFormat::Pcap ? "pcap" : "jsonl"; }
std::string_view to_string(FitTarget t) noexcept { return t == FitTarget::Jitter ? "jitter" : "rtt"; }

std::string_view to_string(XrSource s) noexcept {
  switch (s) {
    case XrSource::All: return "all";
    case XrSource::Fwd: return "fwd";
    case XrSource::Rev: return "rev";
  }
  return "all";
}

std::string_view to_string(JitterInput j) noexcept { return j == JitterInput::Sigma ? "sigma" : "raw"; }

InputFormat parse_format(std::string_view s) {
  const std::string k = lower(s);
  if (k == "pcap") return InputFormat::Pcap;
  if (k == "jsonl") return InputFormat::Jsonl;
  throw Error(ErrorCode::BadInput, "unknown format '" + std::string(s) + "' (pcap|jsonl)");
}

FitTarget parse_target(std::string_view s) {
  const std::string k = lower(s);
  if (k == "jitter") return FitTarget::Jitter;
  if (k == "rtt") return FitTarget::Rtt;
  throw Error(ErrorCode::BadInput, "unknown fit target '" + std::string(s) + "' (jitter|rtt)");
}

std::vector<FitTarget> parse_targets(std::string_view list) {
  std::vector<FitTarget> out;
  for (const auto& tok : split_list(list)) {
    if (lower(tok) == "none") continue;
    const FitTarget t = parse_target(tok);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

XrSource parse_xr_source(std::string_view s) {
  const std::string k = lower(s);
  if (k == "all") return XrSource::All;
  if (k == "fwd") return XrSource::Fwd;
  if (k == "rev") return XrSource::Rev;
  throw Error(ErrorCode::BadInput, "unknown XR source '" + std::string(s) + "' (all|fwd|rev)");
}

JitterInput parse_jitter_input(std::string_view s) {
  const std::string k = lower(s);
  if (k == "sigma") return JitterInput::Sigma;
  if (k == "raw") return JitterInput::Raw;
  throw Error(ErrorCode::BadInput, "unknown jitter input '" + std::string(s) + "' (sigma|raw)");
}

void AnalysisConfig::validate() const {
  if (inputs.empty()) throw Error(ErrorCode::BadInput, "no input files");
  if (!(sigma_window > 0.0)) throw Error(ErrorCode::BadInput, "--sigma-window must be positive");
  if (!(bw_window > 0.0)) throw Error(ErrorCode::BadInput, "--bw-window must be positive");
  if (hist_bins == 0) throw Error(ErrorCode::BadInput, "histogram bins must be positive");
  if (out_dir.empty()) throw Error(ErrorCode::BadInput, "no output directory");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

InputFormat detect_format(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return InputFormat::Jsonl;
  return InputFormat::Pcap;
}

std::vector<ingest::PacketRecord> load_records(const std::filesystem::path& path, InputFormat format) {
  const std::string data = read_file(path);
  if (format == InputFormat::Jsonl) return ingest::parse_jsonl(data);
  const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
  return ingest::parse_pcap(ingest::ByteView(p, data.size()));
}

ingest::PayloadTypeMap load_payload_types(const std::optional<std::filesystem::path>& codecs_map) {
  auto map = ingest::PayloadTypeMap::defaults();
  if (codecs_map) map.merge_json(read_file(*codecs_map));
  return map;
}

}  // namespace voipstat::app
