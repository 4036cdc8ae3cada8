#include "voipstat/app/report.hpp"

#include <algorithm>
#include <exception>
#include <map>

#include "voipstat/app/config.hpp"
#include "voipstat/app/schema.hpp"
#include "voipstat/error.hpp"
#include "voipstat/stats/boxplot.hpp"

namespace voipstat::app {

namespace {

std::vector<double> collect(std::span<const Json* const> reports, const Json::json_pointer& ptr) {
  std::vector<double> out;
  for (const Json* r : reports) {
    if (r->contains(ptr) && (*r)[ptr].is_number()) out.push_back((*r)[ptr].get<double>());
  }
  return out;
}

Json box_or_null(const std::vector<double>& v) { return v.empty() ? Json(nullptr) : to_json(stats::boxplot_stats(v)); }

}  // namespace

std::vector<std::filesystem::path> find_reports(std::span<const std::filesystem::path> inputs) {
  std::vector<std::filesystem::path> out;
  for (const auto& in : inputs) {
    if (std::filesystem::is_directory(in)) {
      for (const auto& e : std::filesystem::recursive_directory_iterator(in)) {
        if (e.is_regular_file() && e.path().filename() == "report.json") out.push_back(e.path());
      }
    } else if (std::filesystem::exists(in)) {
      out.push_back(in);
    } else {
      throw Error(ErrorCode::Io, "no such file or directory: " + in.string());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Json compare_reports(std::span<const Json> reports) {
  std::map<std::string, std::vector<const Json*>> by_tag;
  for (const auto& r : reports) by_tag[r.value("scenario_tag", std::string())].push_back(&r);

  Json scenarios = Json::array();
  for (const auto& [tag, group] : by_tag) {
    Json s;
    s["scenario_tag"] = tag;
    s["sessions"] = group.size();
    s["csd"] = box_or_null(collect(group, Json::json_pointer("/sip/csd")));
    s["sdd"] = box_or_null(collect(group, Json::json_pointer("/sip/sdd")));
    s["sigma_j_mean"] = box_or_null(collect(group, Json::json_pointer("/streams/fwd/sigma_j/mean")));
    s["rtt_mean"] = box_or_null(collect(group, Json::json_pointer("/xr/rtt/mean")));

    std::map<std::string, std::vector<double>> loss;
    for (const Json* r : group) {
      const std::string codec = (*r)["codec"].is_object() ? (*r)["codec"]["name"].get<std::string>() : "unknown";
      loss[codec].push_back((*r)["streams"]["fwd"]["loss"]["loss_pct"].get<double>());
    }
    Json by_codec = Json::array();
    for (const auto& [codec, v] : loss) {
      double sum = 0.0;
      for (double x : v) sum += x;
      by_codec.push_back(Json{{"codec", codec}, {"sessions", v.size()}, {"mean_loss_pct", sum / v.size()}});
    }
    s["loss_by_codec"] = by_codec;
    scenarios.push_back(s);
  }
  return Json{{"schema", "voipstat.comparison/1"}, {"reports", reports.size()}, {"scenarios", scenarios}};
}

int cmd_report(const ReportConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.inputs.empty()) throw Error(ErrorCode::BadInput, "no inputs");
    std::vector<Json> reports;
    for (const auto& path : find_reports(config.inputs)) {
      Json doc;
      try {
        doc = Json::parse(read_file(path));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadInput, path.string() + ": " + e.what());
      }
      const auto problems = validate_schema(doc, session_report_schema());
      if (!problems.empty()) throw Error(ErrorCode::BadInput, path.string() + ": " + problems.front());
      reports.push_back(std::move(doc));
    }
    if (reports.empty()) err << "warning: no session reports found\n";
    const Json table = compare_reports(reports);
    if (config.out) {
      write_file(*config.out, dump(table));
    } else {
      out << dump(table);
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace voipstat::app
