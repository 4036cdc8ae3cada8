#include "voipstat/ingest/jsonl.hpp"

#include <nlohmann/json.hpp>

namespace voipstat::ingest {

using nlohmann::json;

std::vector<PacketRecord> parse_jsonl(std::string_view text) {
  std::vector<PacketRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;

    try {
      const json j = json::parse(line);
      const std::string proto = j.value("proto", std::string("udp"));
      if (proto != "udp" && proto != "UDP") continue;
      PacketRecord rec;
      rec.ts = Timestamp::from_seconds(j.at("ts").get<double>());
      rec.src_addr = j.at("src").get<std::string>();
      rec.dst_addr = j.at("dst").get<std::string>();
      const auto sport = j.at("sport").get<std::int64_t>();
      const auto dport = j.at("dport").get<std::int64_t>();
      if (sport < 0 || sport > 0xffff || dport < 0 || dport > 0xffff) {
        throw Error(ErrorCode::BadInput, "port out of range");
      }
      rec.src_port = static_cast<std::uint16_t>(sport);
      rec.dst_port = static_cast<std::uint16_t>(dport);
      rec.payload = from_hex(j.at("payload_hex").get<std::string>());
      records.push_back(std::move(rec));
    } catch (const Error& e) {
      throw Error(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::string write_jsonl(const std::vector<PacketRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    json j;
    j["ts"] = rec.ts.seconds();
    j["src"] = rec.src_addr;
    j["dst"] = rec.dst_addr;
    j["sport"] = rec.src_port;
    j["dport"] = rec.dst_port;
    j["proto"] = "udp";
    j["payload_hex"] = to_hex(rec.payload);
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace voipstat::ingest
