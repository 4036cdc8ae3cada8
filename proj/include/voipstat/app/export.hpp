#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "voipstat/evt/gev_fit.hpp"
#include "voipstat/evt/select.hpp"
#include "voipstat/metrics/metrics.hpp"
#include "voipstat/metrics/series.hpp"
#include "voipstat/stats/boxplot.hpp"
#include "voipstat/stats/ecdf.hpp"
#include "voipstat/stats/histogram.hpp"
#include "voipstat/stats/pca.hpp"

namespace voipstat::app {

/// Reports keep insertion order so files are stable and readable.
using Json = nlohmann::ordered_json;

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// Serializes with two-space indent and a trailing newline; non-finite
/// numbers become null.
std::string dump(const Json& doc);

/// |xi| at or above this is flagged as an extreme shape in fit reports.
inline constexpr double kExtremeShape = 1.0;

Json to_json(const metrics::SeriesSummary& s);
Json to_json(const metrics::LossSummary& s);
Json to_json(const metrics::SipDelays& d);
Json to_json(const evt::GevFit& fit);
Json to_json(const evt::FamilyFit& fit);
Json to_json(const evt::ModelSelection& sel);
Json to_json(const stats::BoxplotStats& b);

struct AxisLabel {
  std::string name;
  std::string unit;
};

Json to_json(const stats::BivariateHist& h, const AxisLabel& x, const AxisLabel& y);
Json to_json(const stats::PcaResult& p, std::span<const AxisLabel> variables);

/// CSV with header `t,value,unit`.
std::string series_csv(const metrics::MetricSeries& series);
/// CSV with header `x,cdf,unit` over the distinct sample values.
std::string ecdf_csv(const stats::EmpiricalCdf& cdf, std::string_view unit);
/// Long-format grid: `x_lo,x_hi,y_lo,y_hi,count,density`.
std::string hist_csv(const stats::BivariateHist& h);

}  // namespace voipstat::app
