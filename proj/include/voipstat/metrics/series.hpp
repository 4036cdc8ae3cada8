#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace voipstat::metrics {

enum class MetricName { Jitter, SigmaJ, Bandwidth, Rtt, RFactor, SignalLevel, SigmaSl, Transit };
enum class Unit { Ms, Kbps, Score, Dbm };

/// Fixed unit per metric: jitter/sigma_j/rtt/transit in ms, bandwidth in kbps,
/// r_factor as a score, signal_level/sigma_sl in dB relative to 0 dBm0.
Unit unit_of(MetricName name) noexcept;
std::string_view to_string(MetricName name) noexcept;
std::string_view to_string(Unit unit) noexcept;
std::optional<MetricName> metric_from_string(std::string_view name);

struct Sample {
  double t;  // seconds
  double v;
};

/// Time-ordered samples of one metric. Times are non-decreasing; two packets
/// captured in the same microsecond legitimately share a timestamp.
class MetricSeries {
 public:
  explicit MetricSeries(MetricName name) : name_(name) {}

  /// Throws `Error(BadInput)` if `t` precedes the last sample or is not finite.
  void push(double t, double v);

  MetricName name() const noexcept { return name_; }
  Unit unit() const noexcept { return unit_of(name_); }
  std::span<const Sample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::vector<double> times() const;
  std::vector<double> values() const;

 private:
  MetricName name_;
  std::vector<Sample> samples_;
};

struct SeriesSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 below two samples
  double min = 0.0;
  double max = 0.0;
};

SeriesSummary summarize(const MetricSeries& series);

/// Value of `series` at the latest sample with time <= t, if any.
std::optional<double> value_at(const MetricSeries& series, double t);

}  // namespace voipstat::metrics
