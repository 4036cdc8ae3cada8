#include "voipstat/app/fit.hpp"

#include <charconv>
#include <cmath>
#include <exception>

#include "voipstat/app/schema.hpp"
#include "voipstat/error.hpp"
#include "voipstat/evt/select.hpp"
#include "voipstat/metrics/series.hpp"

namespace voipstat::app {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || r.ec != std::errc() || r.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::BadInput, "line " + std::to_string(line) + ": not a number: '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

std::vector<double> read_values(std::string_view text) {
  std::vector<double> out;
  bool csv = false;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view row = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line;
    if (row.empty() || row.front() == '#') continue;
    if (out.empty() && !csv && row == "t,value,unit") {
      csv = true;
      continue;
    }
    if (csv) {
      const std::size_t a = row.find(',');
      const std::size_t b = a == std::string_view::npos ? a : row.find(',', a + 1);
      if (b == std::string_view::npos) {
        throw Error(ErrorCode::BadInput, "line " + std::to_string(line) + ": expected t,value,unit");
      }
      row = trim(row.substr(a + 1, b - a - 1));
    }
    out.push_back(parse_number(row, line));
  }
  return out;
}

Json fit_report(std::span<const double> values, FitTarget target, std::span<const evt::Family> candidates) {
  if (values.size() < evt::kMinFitPoints) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(values.size()) + " values, need at least " +
                                             std::to_string(evt::kMinFitPoints));
  }
  metrics::MetricSeries s(target == FitTarget::Jitter ? metrics::MetricName::Jitter : metrics::MetricName::Rtt);
  for (std::size_t i = 0; i < values.size(); ++i) s.push(static_cast<double>(i), values[i]);

  Json j;
  j["schema"] = "voipstat.fit_report/1";
  j["target"] = std::string(to_string(target));
  j["n"] = values.size();
  j["summary"] = to_json(metrics::summarize(s));
  const Json sel = to_json(evt::select_model(values, candidates));
  for (auto it = sel.begin(); it != sel.end(); ++it) j[it.key()] = it.value();
  return j;
}

int cmd_fit(const FitConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto values = read_values(read_file(config.input));
    const Json report = fit_report(values, config.target, config.candidates);
    const auto problems = validate_schema(report, fit_report_schema());
    if (!problems.empty()) throw Error(ErrorCode::BadInput, "fit report violates the schema: " + problems.front());
    if (config.out) {
      write_file(*config.out, dump(report));
    } else {
      out << dump(report);
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << config.input.string() << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace voipstat::app
