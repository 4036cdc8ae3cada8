#include "voipstat/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "voipstat/error.hpp"
#include "voipstat/kernels/kernels.hpp"

namespace voipstat::metrics {

namespace {

// Unrolled RTP timestamps as send times in microseconds relative to the first
// packet. Exact for clock rates that divide 1 MHz.
std::vector<double> send_micros(std::span<const RtpPacket> stream, std::uint32_t clock_rate) {
  if (clock_rate == 0) throw Error(ErrorCode::DomainError, "clock rate must be positive");
  std::vector<double> out;
  out.reserve(stream.size());
  std::int64_t unrolled = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (i > 0) {
      unrolled += static_cast<std::int32_t>(stream[i].rtp_ts - stream[i - 1].rtp_ts);
    }
    out.push_back(static_cast<double>(unrolled) * 1e6 / static_cast<double>(clock_rate));
  }
  return out;
}

// Capture clocks tick in microseconds; rounding the difference removes the
// representation error of the seconds values.
double micros_between(double from_s, double to_s) { return std::round((to_s - from_s) * 1e6); }

double round_to_micros(double seconds) { return std::round(seconds * 1e6) / 1e6; }

}  // namespace

MetricSeries jitter_series(std::span<const RtpPacket> stream, std::uint32_t clock_rate, JitterMode mode) {
  if (stream.size() < 2) throw Error(ErrorCode::TooFewPackets, "jitter needs at least two packets");
  const auto tt = send_micros(stream, clock_rate);
  MetricSeries out(MetricName::Jitter);
  double smoothed = 0.0;
  for (std::size_t n = 1; n < stream.size(); ++n) {
    const double d_recv = micros_between(stream[n - 1].capture_ts, stream[n].capture_ts);
    const double d_send = tt[n] - tt[n - 1];
    const double j = std::fabs(d_recv - d_send) / 1000.0;
    if (mode == JitterMode::Raw) {
      out.push(stream[n].capture_ts, j);
    } else {
      smoothed += (j - smoothed) / 16.0;
      out.push(stream[n].capture_ts, smoothed);
    }
  }
  return out;
}

MetricSeries transit_series(std::span<const RtpPacket> stream, std::uint32_t clock_rate) {
  const auto tt = send_micros(stream, clock_rate);
  MetricSeries out(MetricName::Transit);
  if (stream.empty()) return out;
  for (std::size_t n = 0; n < stream.size(); ++n) {
    const double d_recv = micros_between(stream.front().capture_ts, stream[n].capture_ts);
    out.push(stream[n].capture_ts, (d_recv - tt[n]) / 1000.0);
  }
  return out;
}

MetricSeries moving_std(const MetricSeries& series, double window_s, MetricName out_name) {
  if (!(window_s > 0.0)) throw Error(ErrorCode::DomainError, "window must be positive");
  const auto t = series.times();
  const auto v = series.values();
  std::vector<double> sd(t.size());
  kernels::parallel::moving_std(t, v, window_s, sd);
  MetricSeries out(out_name);
  for (std::size_t i = 0; i < t.size(); ++i) out.push(t[i], sd[i]);
  return out;
}

MetricSeries bandwidth_series(std::span<const RtpPacket> stream, double window_s, std::size_t overhead_bytes) {
  if (!(window_s > 0.0)) throw Error(ErrorCode::DomainError, "window must be positive");
  std::vector<double> t(stream.size());
  std::vector<double> bytes(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    t[i] = stream[i].capture_ts;
    bytes[i] = static_cast<double>(stream[i].payload_len + stream[i].header_len + overhead_bytes);
  }
  std::vector<double> sum(stream.size());
  kernels::parallel::window_sum(t, bytes, window_s, sum);
  MetricSeries out(MetricName::Bandwidth);
  for (std::size_t i = 0; i < t.size(); ++i) out.push(t[i], sum[i] * 8.0 / window_s / 1000.0);
  return out;
}

LossSummary loss_summary(std::span<const RtpPacket> stream) {
  LossSummary s;
  if (stream.empty()) return s;
  std::set<std::int64_t> seen;
  std::int64_t ext = stream.front().seq;
  std::int64_t lo = ext;
  std::int64_t hi = ext;
  seen.insert(ext);
  for (std::size_t i = 1; i < stream.size(); ++i) {
    ext += static_cast<std::int16_t>(static_cast<std::uint16_t>(stream[i].seq - stream[i - 1].seq));
    seen.insert(ext);
    lo = std::min(lo, ext);
    hi = std::max(hi, ext);
  }
  s.expected = static_cast<std::uint64_t>(hi - lo + 1);
  s.received = seen.size();
  const double missing = static_cast<double>(s.expected) - static_cast<double>(s.received);
  s.loss_pct = std::clamp(100.0 * missing / static_cast<double>(s.expected), 0.0, 100.0);
  return s;
}

MetricSeries rtt_series(std::span<const VoipMetricsBlock> blocks) {
  MetricSeries out(MetricName::Rtt);
  for (const auto& b : blocks) {
    if (b.round_trip_delay == ingest::kDelayUnavailable) continue;
    out.push(b.report_ts, static_cast<double>(b.round_trip_delay));
  }
  return out;
}

double r_factor(double r0, double is, double id, double ieff, double a) {
  return std::clamp(r0 - is - id - ieff + a, 0.0, 100.0);
}

MetricSeries xr_metric_series(std::span<const VoipMetricsBlock> blocks, XrField which) {
  MetricSeries out(which == XrField::RFactor ? MetricName::RFactor : MetricName::SignalLevel);
  for (const auto& b : blocks) {
    if (which == XrField::RFactor) {
      if (b.r_factor == ingest::kRFactorUnavailable) continue;
      out.push(b.report_ts, static_cast<double>(b.r_factor));
    } else {
      out.push(b.report_ts, static_cast<double>(b.signal_level));
    }
  }
  return out;
}

SipDelays sip_delays(std::span<const SipMessage> dialog) {
  SipDelays d;
  auto delay = [&](std::string_view method, int code) -> std::optional<double> {
    auto req = std::find_if(dialog.begin(), dialog.end(),
                            [&](const SipMessage& m) { return m.is_request(method); });
    if (req == dialog.end()) return std::nullopt;
    for (auto it = dialog.begin(); it != dialog.end(); ++it) {
      if (it->is_response(code) && it->cseq == req->cseq && it->cseq_method == method &&
          it->capture_ts >= req->capture_ts) {
        return round_to_micros(it->capture_ts - req->capture_ts);
      }
    }
    return std::nullopt;
  };
  d.csd = delay("INVITE", 180);
  d.sdd = delay("BYE", 200);
  return d;
}

}  // namespace voipstat::metrics
