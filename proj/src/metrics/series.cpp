#include "voipstat/metrics/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voipstat/error.hpp"

namespace voipstat::metrics {

Unit unit_of(MetricName name) noexcept {
  switch (name) {
    case MetricName::Jitter:
    case MetricName::SigmaJ:
    case MetricName::Rtt:
    case MetricName::Transit:
      return Unit::Ms;
    case MetricName::Bandwidth:
      return Unit::Kbps;
    case MetricName::RFactor:
      return Unit::Score;
    case MetricName::SignalLevel:
    case MetricName::SigmaSl:
      return Unit::Dbm;
  }
  return Unit::Ms;
}

std::string_view to_string(MetricName name) noexcept {
  switch (name) {
    case MetricName::Jitter: return "jitter";
    case MetricName::SigmaJ: return "sigma_j";
    case MetricName::Bandwidth: return "bandwidth";
    case MetricName::Rtt: return "rtt";
    case MetricName::RFactor: return "r_factor";
    case MetricName::SignalLevel: return "signal_level";
    case MetricName::SigmaSl: return "sigma_sl";
    case MetricName::Transit: return "transit";
  }
  return "unknown";
}

std::string_view to_string(Unit unit) noexcept {
  switch (unit) {
    case Unit::Ms: return "ms";
    case Unit::Kbps: return "kbps";
    case Unit::Score: return "score";
    case Unit::Dbm: return "dBm";
  }
  return "unknown";
}

std::optional<MetricName> metric_from_string(std::string_view name) {
  for (auto m : {MetricName::Jitter, MetricName::SigmaJ, MetricName::Bandwidth, MetricName::Rtt,
                 MetricName::RFactor, MetricName::SignalLevel, MetricName::SigmaSl, MetricName::Transit}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

void MetricSeries::push(double t, double v) {
  if (!std::isfinite(t)) throw Error(ErrorCode::BadInput, "non-finite sample time");
  if (!samples_.empty() && t < samples_.back().t) {
    throw Error(ErrorCode::BadInput, std::string(to_string(name_)) + ": sample times must not decrease");
  }
  samples_.push_back({t, v});
}

std::vector<double> MetricSeries::times() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const Sample& s) { return s.t; });
  return out;
}

std::vector<double> MetricSeries::values() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const Sample& s) { return s.v; });
  return out;
}

SeriesSummary summarize(const MetricSeries& series) {
  SeriesSummary s;
  s.count = series.size();
  if (s.count == 0) return s;
  double sum = 0.0;
  s.min = series.samples().front().v;
  s.max = s.min;
  for (const auto& x : series.samples()) {
    sum += x.v;
    s.min = std::min(s.min, x.v);
    s.max = std::max(s.max, x.v);
  }
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (const auto& x : series.samples()) ss += (x.v - s.mean) * (x.v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

std::optional<double> value_at(const MetricSeries& series, double t) {
  const auto samples = series.samples();
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double x, const Sample& s) { return x < s.t; });
  if (it == samples.begin()) return std::nullopt;
  return std::prev(it)->v;
}

}  // namespace voipstat::metrics
