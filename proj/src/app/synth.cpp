#include "voipstat/app/synth.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "voipstat/app/schema.hpp"
#include "voipstat/error.hpp"
#include "voipstat/ingest/jsonl.hpp"
#include "voipstat/ingest/pcap.hpp"
#include "voipstat/ingest/rtcp_xr.hpp"
#include "voipstat/ingest/rtp.hpp"
#include "voipstat/metrics/metrics.hpp"

namespace voipstat::app {

namespace {

using ingest::Codec;
using ingest::PacketRecord;

[[noreturn]] void bad_spec(const std::string& msg) { throw Error(ErrorCode::BadSpec, msg); }

// Dynamic payload types used when a scenario names a codec without one.
std::uint8_t default_payload_type(Codec c) {
  const auto defaults = ingest::PayloadTypeMap::defaults();
  for (const auto& [pt, codec] : defaults.entries()) {
    if (codec == c) return pt;
  }
  switch (c) {
    case Codec::OPUS: return 96;
    case Codec::SPX8: return 97;
    case Codec::SPX16: return 98;
    case Codec::MPEG4_16: return 99;
    default: return 96;
  }
}

std::optional<evt::GevParams> gev_model(const Json& call, const char* key) {
  const auto it = call.find(key);
  if (it == call.end() || it->is_null()) return std::nullopt;
  evt::GevParams p{it->at("xi").get<double>(), it->at("sigma").get<double>(), it->at("mu").get<double>()};
  if (!(p.sigma > 0.0) || !std::isfinite(p.xi) || !std::isfinite(p.mu)) {
    bad_spec(std::string(key) + ": sigma must be positive and all parameters finite");
  }
  return p;
}

Endpoint endpoint(const Json& call, const char* key, Endpoint def) {
  const auto it = call.find(key);
  if (it == call.end()) return def;
  def.addr = it->value("addr", def.addr);
  def.sip_port = it->value("sip_port", def.sip_port);
  def.rtp_port = it->value("rtp_port", def.rtp_port);
  if (def.rtp_port == 0 || def.rtp_port == 65535 || def.sip_port == 0) bad_spec(std::string(key) + ": bad port");
  return def;
}

CallScenario parse_call(const Json& c, std::uint64_t seed, std::size_t index) {
  CallScenario s;
  const std::string codec = c.at("codec").get<std::string>();
  const auto parsed = ingest::codec_from_name(codec);
  if (!parsed) bad_spec("unknown codec '" + codec + "'");
  s.codec = *parsed;
  s.payload_type = c.contains("payload_type") ? c["payload_type"].get<std::uint8_t>() : default_payload_type(s.codec);
  if (c.contains("bitrate_kbps")) s.bitrate_kbps = c["bitrate_kbps"].get<double>();
  s.duration = c.at("duration").get<double>();
  s.ptime = c.value("ptime", s.ptime);
  s.start_ts = c.value("start_ts", s.start_ts);
  s.base_delay = c.value("base_delay", s.base_delay);
  s.jitter = gev_model(c, "jitter");
  s.rtt = gev_model(c, "rtt");
  s.loss = c.value("loss", s.loss);
  s.xr_interval = c.value("xr_interval", s.xr_interval);
  s.signal_level = c.value("signal_level", s.signal_level);
  s.bidirectional = c.value("bidirectional", s.bidirectional);
  s.seed = c.contains("seed") ? c["seed"].get<std::uint64_t>() : seed + index;
  s.call_id = c.value("call_id", "call-" + std::to_string(s.seed) + "-" + std::to_string(index) + "@voipstat");
  // Calls in one scenario get distinct default media ports so that
  // concurrent calls remain separable.
  s.caller.rtp_port = static_cast<std::uint16_t>(s.caller.rtp_port + 4 * (index % 2000));
  s.callee.rtp_port = static_cast<std::uint16_t>(s.callee.rtp_port + 4 * (index % 2000));
  s.caller = endpoint(c, "caller", s.caller);
  s.callee = endpoint(c, "callee", s.callee);
  if (const auto it = c.find("sip"); it != c.end()) {
    s.sip.invite = it->value("invite", s.sip.invite);
    s.sip.ringing = it->value("ringing", s.sip.ringing);
    s.sip.ok = it->value("ok", s.sip.ok);
    s.sip.ack = it->value("ack", s.sip.ack);
    if (it->contains("bye")) s.sip.bye = (*it)["bye"].get<double>();
    s.sip.bye_ok_delay = it->value("bye_ok_delay", s.sip.bye_ok_delay);
  }

  if (!(s.duration > 0.0) || !(s.ptime > 0.0)) bad_spec("duration and ptime must be positive");
  if (s.duration / s.ptime > 1e7) bad_spec("more than 10^7 packets per stream");
  if (!(s.loss >= 0.0 && s.loss < 1.0)) bad_spec("loss must lie in [0, 1)");
  if (!(s.xr_interval > 0.0)) bad_spec("xr_interval must be positive");
  if (!(s.base_delay >= 0.0)) bad_spec("base_delay must be non-negative");
  if (!(s.start_ts >= 0.0)) bad_spec("start_ts must be non-negative");
  if (s.bitrate_kbps && !(*s.bitrate_kbps > 0.0)) bad_spec("bitrate_kbps must be positive");
  if (s.payload_type > 127) bad_spec("payload_type must be 0..127");
  const auto& t = s.sip;
  if (!(t.invite >= 0.0 && t.invite <= t.ringing && t.ringing <= t.ok && t.ok <= t.ack)) {
    bad_spec("sip times must satisfy 0 <= invite <= ringing <= ok <= ack");
  }
  if (t.bye && !(*t.bye > t.ack)) bad_spec("sip.bye must follow ack");
  if (!(t.bye_ok_delay >= 0.0)) bad_spec("sip.bye_ok_delay must be non-negative");
  if (s.caller.addr == s.callee.addr && s.caller.rtp_port == s.callee.rtp_port) {
    bad_spec("caller and callee media endpoints coincide");
  }
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent variate streams per purpose, all derived from the call seed.
evt::UniformStream stream_for(std::uint64_t seed, std::uint64_t purpose) {
  return evt::UniformStream(splitmix64(splitmix64(seed) ^ (purpose * 0x632be59bd9b4e019ULL)));
}

std::uint32_t draw_u32(evt::UniformStream& u) { return static_cast<std::uint32_t>(u.next() * 4294967296.0); }

double standard_normal(evt::UniformStream& u) {
  const double a = u.next();
  const double b = u.next();
  return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * std::numbers::pi * b);
}

std::string sdp(const Endpoint& e, std::uint8_t pt, const ingest::CodecInfo& info) {
  const std::string ip = e.addr.find(':') == std::string::npos ? "IP4" : "IP6";
  return "v=0\r\no=- 0 0 IN " + ip + " " + e.addr + "\r\ns=-\r\nc=IN " + ip + " " + e.addr + "\r\nt=0 0\r\nm=audio " +
         std::to_string(e.rtp_port) + " RTP/AVP " + std::to_string(pt) + "\r\na=rtpmap:" + std::to_string(pt) + " " +
         std::string(info.name) + "/" + std::to_string(info.clock_rate_hz) + "\r\n";
}

struct Dialog {
  const CallScenario& s;
  std::string from_tag;
  std::string to_tag;

  std::string message(const std::string& start, const Endpoint& from, std::uint32_t cseq, const std::string& method,
                      bool with_to_tag, const std::string& body) const {
    std::string m = start + "\r\n";
    m += "Via: SIP/2.0/UDP " + from.addr + ":" + std::to_string(from.sip_port) + "\r\n";
    m += "From: <sip:caller@" + s.caller.addr + ">;tag=" + from_tag + "\r\n";
    m += "To: <sip:callee@" + s.callee.addr + ">" + (with_to_tag ? ";tag=" + to_tag : std::string()) + "\r\n";
    m += "Call-ID: " + s.call_id + "\r\n";
    m += "CSeq: " + std::to_string(cseq) + " " + method + "\r\n";
    if (!body.empty()) m += "Content-Type: application/sdp\r\n";
    m += "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n" + body;
    return m;
  }
};

PacketRecord record(double t, const Endpoint& from, std::uint16_t sport, const Endpoint& to, std::uint16_t dport,
                    ingest::Bytes payload) {
  PacketRecord r;
  r.ts = ingest::Timestamp::from_seconds(t);
  r.src_addr = from.addr;
  r.dst_addr = to.addr;
  r.src_port = sport;
  r.dst_port = dport;
  r.payload = std::move(payload);
  return r;
}

ingest::Bytes text_bytes(const std::string& s) { return ingest::Bytes(s.begin(), s.end()); }

struct StreamState {
  std::uint32_t ssrc = 0;
  std::uint64_t sent = 0;
  std::uint64_t lost = 0;
};

// One RTP direction; returns the records and fills `state` with counters.
std::vector<PacketRecord> rtp_stream(const CallScenario& s, const Endpoint& from, const Endpoint& to, double first_send,
                                     std::uint64_t purpose, StreamState& state, std::uint32_t ssrc) {
  const auto& info = ingest::codec_info(s.codec);
  auto ids = stream_for(s.seed, purpose);
  auto loss = stream_for(s.seed, purpose + 1);
  auto delay = stream_for(s.seed, purpose + 2);
  state.ssrc = ssrc;
  const auto seq0 = static_cast<std::uint16_t>(draw_u32(ids));
  const std::uint32_t ts0 = draw_u32(ids);
  const auto samples = static_cast<std::uint32_t>(std::llround(s.ptime * info.clock_rate_hz));
  const double kbps = s.bitrate_kbps.value_or(info.bitrate_min_kbps);
  const auto payload_len = static_cast<std::size_t>(std::max(1LL, std::llround(kbps * 1000.0 * s.ptime / 8.0)));
  const auto count = static_cast<std::uint64_t>(std::llround(s.duration / s.ptime));

  std::vector<PacketRecord> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const double send = first_send + static_cast<double>(k) * s.ptime;
    // Every draw happens for every packet so that the loss and delay streams
    // stay aligned whatever the other model does.
    const bool dropped = loss.next() < s.loss && k > 0;
    const double u = delay.next();
    state.sent++;
    if (dropped) {
      state.lost++;
      continue;
    }
    const double perturb_ms = s.jitter ? evt::gev_quantile(*s.jitter, u) : 0.0;
    const double arrival = std::max(send, send + s.base_delay + perturb_ms / 1000.0);
    ingest::RtpPacket p;
    p.marker = k == 0;
    p.payload_type = s.payload_type;
    p.seq = static_cast<std::uint16_t>(seq0 + k);
    p.rtp_ts = ts0 + static_cast<std::uint32_t>(k) * samples;
    p.ssrc = ssrc;
    p.payload_len = payload_len;
    out.push_back(record(arrival, from, from.rtp_port, to, to.rtp_port, ingest::encode_rtp(p)));
  }
  return out;
}

std::vector<PacketRecord> synthesize_call(const CallScenario& s) {
  const auto& info = ingest::codec_info(s.codec);
  auto ids = stream_for(s.seed, 1);
  const std::uint32_t ssrc_a = draw_u32(ids);
  std::uint32_t ssrc_b = draw_u32(ids);
  if (ssrc_b == ssrc_a) ssrc_b ^= 1u;

  Dialog d{s, "a" + std::to_string(draw_u32(ids)), "b" + std::to_string(draw_u32(ids))};
  const double t0 = s.start_ts;
  const std::string ruri = "sip:callee@" + s.callee.addr;
  std::vector<PacketRecord> out;
  auto sip_packet = [&](double t, const Endpoint& from, const Endpoint& to, const std::string& text) {
    out.push_back(record(t0 + t, from, from.sip_port, to, to.sip_port, text_bytes(text)));
  };
  sip_packet(s.sip.invite, s.caller, s.callee,
             d.message("INVITE " + ruri + " SIP/2.0", s.caller, 1, "INVITE", false, sdp(s.caller, s.payload_type, info)));
  sip_packet(s.sip.ringing, s.callee, s.caller, d.message("SIP/2.0 180 Ringing", s.callee, 1, "INVITE", true, ""));
  sip_packet(s.sip.ok, s.callee, s.caller,
             d.message("SIP/2.0 200 OK", s.callee, 1, "INVITE", true, sdp(s.callee, s.payload_type, info)));
  sip_packet(s.sip.ack, s.caller, s.callee, d.message("ACK " + ruri + " SIP/2.0", s.caller, 1, "ACK", true, ""));

  const double media_start = t0 + s.sip.ack + 0.02;
  const double rev_offset = 0.1;
  StreamState fwd, rev;
  auto a_to_b = rtp_stream(s, s.caller, s.callee, media_start, 10, fwd, ssrc_a);
  out.insert(out.end(), a_to_b.begin(), a_to_b.end());
  if (s.bidirectional) {
    auto b_to_a = rtp_stream(s, s.callee, s.caller, media_start + rev_offset, 20, rev, ssrc_b);
    out.insert(out.end(), b_to_a.begin(), b_to_a.end());
  }
  const double media_end = media_start + s.duration + (s.bidirectional ? rev_offset : 0.0);

  // Callee reports on the caller's stream. Loss counters follow the
  // generator's own draws so the reported fraction matches what was dropped.
  auto rtt_u = stream_for(s.seed, 30);
  auto level_u = stream_for(s.seed, 31);
  auto replay_loss = stream_for(s.seed, 11);
  std::uint64_t replay_sent = 0, replay_lost = 0;
  const std::uint16_t rtcp_a = static_cast<std::uint16_t>(s.caller.rtp_port + 1);
  const std::uint16_t rtcp_b = static_cast<std::uint16_t>(s.callee.rtp_port + 1);
  for (std::uint64_t k = 1;; ++k) {
    const double t = media_start + static_cast<double>(k) * s.xr_interval;
    if (t > media_start + s.duration) break;
    while (replay_sent < fwd.sent && media_start + static_cast<double>(replay_sent) * s.ptime <= t) {
      if (replay_loss.next() < s.loss && replay_sent > 0) replay_lost++;
      replay_sent++;
    }
    ingest::VoipMetricsBlock b;
    b.source_ssrc = ssrc_a;
    const double frac = replay_sent ? static_cast<double>(replay_lost) / static_cast<double>(replay_sent) : 0.0;
    b.loss_rate = static_cast<std::uint8_t>(std::min(255.0, std::floor(frac * 256.0)));
    const double rtt_ms = s.rtt ? evt::gev_quantile(*s.rtt, rtt_u.next()) : 2000.0 * s.base_delay;
    const double rounded = std::round(rtt_ms);
    b.round_trip_delay = (rounded >= 0.0 && rounded < ingest::kDelayUnavailable)
                             ? static_cast<std::uint16_t>(rounded)
                             : ingest::kDelayUnavailable;
    b.end_system_delay = static_cast<std::uint16_t>(std::lround(1000.0 * s.ptime * 2));
    const double level = std::clamp(std::round(s.signal_level + 2.0 * standard_normal(level_u)), -127.0, 0.0);
    b.signal_level = static_cast<std::int8_t>(level);
    b.noise_level = -60;
    b.rerl = 127;
    b.gmin = 16;
    // E-model with a PCM-like equipment impairment: Ie = 0, Bpl = 10.
    const double one_way = b.round_trip_delay == ingest::kDelayUnavailable ? 1000.0 * s.base_delay : rtt_ms / 2.0;
    const double id = 0.024 * one_way + (one_way > 177.3 ? 0.11 * (one_way - 177.3) : 0.0);
    const double ppl = 100.0 * frac;
    const double ieff = 95.0 * ppl / (ppl + 10.0);
    b.r_factor = static_cast<std::uint8_t>(std::lround(metrics::r_factor(93.2, 1.41, id, ieff, 0.0)));
    b.jb_nominal = 40;
    b.jb_maximum = 80;
    b.jb_abs_max = 200;
    out.push_back(record(t, s.callee, rtcp_b, s.caller, rtcp_a, ingest::encode_rtcp_xr(ssrc_b, {b})));
  }

  const double bye = s.sip.bye ? t0 + *s.sip.bye : media_end + 0.5;
  out.push_back(record(bye, s.caller, s.caller.sip_port, s.callee, s.callee.sip_port,
                       text_bytes(d.message("BYE " + ruri + " SIP/2.0", s.caller, 2, "BYE", true, ""))));
  out.push_back(record(bye + s.sip.bye_ok_delay, s.callee, s.callee.sip_port, s.caller, s.caller.sip_port,
                       text_bytes(d.message("SIP/2.0 200 OK", s.callee, 2, "BYE", true, ""))));
  return out;
}

}  // namespace

Scenario parse_scenario(const Json& doc, std::optional<std::uint64_t> seed_override) {
  // Validate against the matching branch so messages point at the real problem.
  Json schema = scenario_schema();
  schema.erase("anyOf");
  schema["$ref"] = doc.is_object() && doc.contains("calls") ? "#/definitions/multi" : "#/definitions/call";
  const auto problems = validate_schema(doc, schema);
  if (!problems.empty()) bad_spec("scenario: " + problems.front());
  Scenario out;
  try {
    if (doc.contains("format")) out.format = parse_format(doc["format"].get<std::string>());
    const std::uint64_t base = seed_override.value_or(doc.value("seed", std::uint64_t{0}));
    if (doc.contains("calls")) {
      std::size_t i = 0;
      for (const auto& c : doc["calls"]) {
        CallScenario call = parse_call(c, base, i++);
        if (seed_override) call.seed = *seed_override + (i - 1);
        out.calls.push_back(std::move(call));
      }
    } else {
      CallScenario call = parse_call(doc, base, 0);
      if (seed_override) call.seed = *seed_override;
      out.calls.push_back(std::move(call));
    }
  } catch (const nlohmann::json::exception& e) {
    bad_spec(std::string("scenario: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BadSpec) throw;
    bad_spec(e.what());
  }
  if (out.calls.empty()) bad_spec("scenario has no calls");
  return out;
}

std::vector<PacketRecord> synthesize(const Scenario& scenario) {
  std::vector<PacketRecord> out;
  for (const auto& call : scenario.calls) {
    auto recs = synthesize_call(call);
    out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
  }
  std::stable_sort(out.begin(), out.end(), [](const PacketRecord& a, const PacketRecord& b) { return a.ts < b.ts; });
  return out;
}

int cmd_synth(const SynthConfig& config, std::ostream& err) {
  try {
    Json doc;
    try {
      doc = Json::parse(read_file(config.spec));
    } catch (const nlohmann::json::exception& e) {
      bad_spec(std::string("scenario is not valid JSON: ") + e.what());
    }
    const Scenario scenario = parse_scenario(doc, config.seed);
    const auto records = synthesize(scenario);
    const InputFormat fmt = config.format.value_or(scenario.format.value_or(detect_format(config.out)));
    if (fmt == InputFormat::Jsonl) {
      write_file(config.out, ingest::write_jsonl(records));
    } else {
      const auto bytes = ingest::write_pcap(records);
      write_file(config.out, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace voipstat::app
