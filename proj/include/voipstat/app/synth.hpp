#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "voipstat/app/config.hpp"
#include "voipstat/app/export.hpp"
#include "voipstat/evt/gev.hpp"
#include "voipstat/ingest/codec.hpp"
#include "voipstat/ingest/packet.hpp"

namespace voipstat::app {

struct Endpoint {
  std::string addr;
  std::uint16_t sip_port = 5060;
  std::uint16_t rtp_port = 0;  // RTCP uses rtp_port + 1
};

/// SIP event times in seconds after the call start.
struct SipTimeline {
  double invite = 0.0;
  double ringing = 1.392;
  double ok = 3.0;
  double ack = 3.05;
  std::optional<double> bye;     // default: 0.5 s after the last media packet
  double bye_ok_delay = 0.1981;  // BYE -> 200 OK
};

struct CallScenario {
  ingest::Codec codec = ingest::Codec::G711A;
  std::uint8_t payload_type = 8;
  std::optional<double> bitrate_kbps;  // codec rate when unset
  double duration = 60.0;              // seconds of media
  double ptime = 0.020;                // packetization interval, seconds
  double start_ts = 1000.0;            // capture time of the INVITE offset origin
  double base_delay = 0.040;           // one-way transit before perturbation, seconds
  std::optional<evt::GevParams> jitter;  // transit perturbation, ms
  std::optional<evt::GevParams> rtt;     // XR round-trip delay, ms
  double loss = 0.0;                     // Bernoulli drop probability per packet
  double xr_interval = 5.0;              // seconds between XR reports
  double signal_level = -20.0;           // mean dBm0
  bool bidirectional = true;
  std::uint64_t seed = 0;
  std::string call_id;
  Endpoint caller{"10.0.0.1", 5060, 40000};
  Endpoint callee{"10.0.0.2", 5060, 50000};
  SipTimeline sip;
};

struct Scenario {
  std::vector<CallScenario> calls;
  std::optional<InputFormat> format;
};

/// Validates against the scenario schema and checks value ranges. A document
/// is either one call object or {"calls": [...]}. Throws `Error(BadSpec)`.
Scenario parse_scenario(const Json& doc, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Packets of every call, sorted by capture time. The caller's stream is
/// captured on arrival at the callee and vice versa; the callee sends one
/// VoIP Metrics report per interval about the caller's stream.
std::vector<ingest::PacketRecord> synthesize(const Scenario& scenario);

struct SynthConfig {
  std::filesystem::path spec;
  std::filesystem::path out;
  std::optional<InputFormat> format;  // from the output extension when unset
  std::optional<std::uint64_t> seed;
};

/// Returns 0 on success, 1 on error (reported on `err`).
int cmd_synth(const SynthConfig& config, std::ostream& err);

}  // namespace voipstat::app
