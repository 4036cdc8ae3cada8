#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "voipstat/ingest/rtcp_xr.hpp"
#include "voipstat/ingest/rtp.hpp"
#include "voipstat/ingest/sip.hpp"
#include "voipstat/metrics/series.hpp"

namespace voipstat::metrics {

using ingest::RtpPacket;
using ingest::SipMessage;
using ingest::VoipMetricsBlock;

enum class JitterMode {
  Raw,      // J_n = |(t_r(n) - t_t(n)) - (t_r(n-1) - t_t(n-1))|
  Rfc3550,  // same differences smoothed with the 1/16 running estimator
};

/// Per-packet jitter in ms, one sample per packet after the first, stamped with
/// the packet's capture time. Send times come from the RTP timestamp divided by
/// the clock rate (wrap-around unrolled); the unknown sender clock offset
/// cancels. Throws `Error(TooFewPackets)` below two packets and
/// `Error(DomainError)` for a zero clock rate.
MetricSeries jitter_series(std::span<const RtpPacket> stream, std::uint32_t clock_rate,
                           JitterMode mode = JitterMode::Raw);

/// Relative one-way transit (t_r(n) - t_t(n)) - (t_r(0) - t_t(0)) in ms.
MetricSeries transit_series(std::span<const RtpPacket> stream, std::uint32_t clock_rate);

/// Moving sample standard deviation over (t - window, t]; windows holding
/// fewer than two samples give 0. The result carries `out_name`.
MetricSeries moving_std(const MetricSeries& series, double window_s, MetricName out_name);

/// Moving-average bandwidth in kbps: bytes on the wire (payload + RTP header +
/// overhead) over (t - window, t], times 8, divided by the window.
MetricSeries bandwidth_series(std::span<const RtpPacket> stream, double window_s,
                              std::size_t overhead_bytes = 28);

struct LossSummary {
  std::uint64_t expected = 0;
  std::uint64_t received = 0;
  double loss_pct = 0.0;
};

LossSummary loss_summary(std::span<const RtpPacket> stream);

/// Round-trip delay per report; 0xFFFF (unavailable) is skipped.
MetricSeries rtt_series(std::span<const VoipMetricsBlock> blocks);

/// E-model rating R = R0 - Is - Id - Ie_eff + A, clamped to [0, 100].
double r_factor(double r0, double is, double id, double ieff, double a);

enum class XrField { RFactor, SignalLevel };

/// R-Factor (127 = unavailable, skipped) or signal level (signed byte).
MetricSeries xr_metric_series(std::span<const VoipMetricsBlock> blocks, XrField which);

struct SipDelays {
  std::optional<double> csd;  // seconds, INVITE -> 180 Ringing
  std::optional<double> sdd;  // seconds, BYE -> 200 OK
};

/// Delays are rounded to the microsecond resolution of the capture.
SipDelays sip_delays(std::span<const SipMessage> dialog);

}  // namespace voipstat::metrics
