#include "voipstat/app/export.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace voipstat::app {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

Json sanitize(const Json& j) {
  if (j.is_number_float()) return number(j.get<double>());
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = sanitize(it.value());
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& e : j) out.push_back(sanitize(e));
    return out;
  }
  return j;
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string dump(const Json& doc) { return sanitize(doc).dump(2) + "\n"; }

Json to_json(const metrics::SeriesSummary& s) {
  Json j;
  j["count"] = s.count;
  if (s.count == 0) {
    j["mean"] = nullptr;
    j["std"] = nullptr;
    j["min"] = nullptr;
    j["max"] = nullptr;
  } else {
    j["mean"] = number(s.mean);
    j["std"] = number(s.std);
    j["min"] = number(s.min);
    j["max"] = number(s.max);
  }
  return j;
}

Json to_json(const metrics::LossSummary& s) {
  return Json{{"expected", s.expected}, {"received", s.received}, {"loss_pct", number(s.loss_pct)}};
}

Json to_json(const metrics::SipDelays& d) {
  return Json{{"csd", optional_number(d.csd)}, {"sdd", optional_number(d.sdd)}};
}

Json to_json(const evt::GevFit& fit) {
  Json j;
  j["xi"] = number(fit.params.xi);
  j["sigma"] = number(fit.params.sigma);
  j["mu"] = number(fit.params.mu);
  j["e_max"] = number(fit.e_max);
  j["bic"] = number(fit.bic);
  j["loglik"] = number(fit.loglik);
  j["tail"] = std::string(evt::to_string(fit.tail));
  j["regime"] = std::string(evt::to_string(fit.regime));
  j["extreme_shape"] = std::fabs(fit.params.xi) >= kExtremeShape;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["n"] = fit.n;
  return j;
}

Json to_json(const evt::FamilyFit& fit) {
  Json j;
  j["family"] = std::string(evt::to_string(fit.family));
  j["k"] = fit.k;
  Json params = Json::object();
  const auto names = evt::parameter_names(fit.family);
  for (std::size_t i = 0; i < names.size() && i < fit.params.size(); ++i) {
    params[std::string(names[i])] = number(fit.params[i]);
  }
  j["params"] = params;
  j["loglik"] = number(fit.loglik);
  j["bic"] = number(fit.bic);
  j["e_max"] = number(fit.e_max);
  j["iterations"] = fit.iterations;
  return j;
}

Json to_json(const evt::ModelSelection& sel) {
  Json j;
  Json gev = nullptr;
  Json ranking = Json::array();
  for (const auto& f : sel.ranking) {
    if (f.gev && gev.is_null()) gev = to_json(*f.gev);
    ranking.push_back(to_json(f));
  }
  Json excluded = Json::array();
  for (const auto& e : sel.excluded) {
    excluded.push_back(Json{{"family", std::string(evt::to_string(e.family))}, {"reason", e.reason}});
  }
  j["gev"] = gev;
  j["ranking"] = ranking;
  j["excluded"] = excluded;
  return j;
}

Json to_json(const stats::BoxplotStats& b) {
  Json j;
  j["n"] = b.n;
  j["median"] = number(b.median);
  j["q1"] = number(b.q1);
  j["q3"] = number(b.q3);
  j["iqr"] = number(b.iqr);
  j["whisker_lo"] = number(b.whisker_lo);
  j["whisker_hi"] = number(b.whisker_hi);
  Json out = Json::array();
  for (double v : b.outliers) out.push_back(number(v));
  j["outliers"] = out;
  return j;
}

Json to_json(const stats::BivariateHist& h, const AxisLabel& x, const AxisLabel& y) {
  Json j;
  j["x"] = Json{{"name", x.name}, {"unit", x.unit}};
  j["y"] = Json{{"name", y.name}, {"unit", y.unit}};
  j["x_edges"] = h.x_edges;
  j["y_edges"] = h.y_edges;
  j["counts"] = h.counts;
  j["density"] = h.density;
  return j;
}

Json to_json(const stats::PcaResult& p, std::span<const AxisLabel> variables) {
  Json j;
  Json vars = Json::array();
  for (const auto& v : variables) vars.push_back(Json{{"name", v.name}, {"unit", v.unit}});
  j["variables"] = vars;
  j["standardized"] = true;
  j["observations"] = p.scores.size();
  j["total_variance"] = number(p.total_variance);
  j["explained"] = p.explained;
  j["explained_ratio"] = p.explained_ratio;
  j["components"] = p.components;
  j["loadings"] = p.loadings;
  j["means"] = p.means;
  j["scales"] = p.scales;
  return j;
}

std::string series_csv(const metrics::MetricSeries& series) {
  std::ostringstream out;
  const std::string unit(metrics::to_string(series.unit()));
  out << "t,value,unit\n";
  for (const auto& s : series.samples()) out << format_number(s.t) << ',' << format_number(s.v) << ',' << unit << '\n';
  return out.str();
}

std::string ecdf_csv(const stats::EmpiricalCdf& cdf, std::string_view unit) {
  std::ostringstream out;
  out << "x,cdf,unit\n";
  for (std::size_t i = 0; i < cdf.points().size(); ++i) {
    out << format_number(cdf.points()[i]) << ',' << format_number(cdf.probabilities()[i]) << ',' << unit << '\n';
  }
  return out.str();
}

std::string hist_csv(const stats::BivariateHist& h) {
  std::ostringstream out;
  out << "x_lo,x_hi,y_lo,y_hi,count,density\n";
  for (std::size_t i = 0; i < h.nx(); ++i) {
    for (std::size_t k = 0; k < h.ny(); ++k) {
      out << format_number(h.x_edges[i]) << ',' << format_number(h.x_edges[i + 1]) << ','
          << format_number(h.y_edges[k]) << ',' << format_number(h.y_edges[k + 1]) << ',' << h.counts[i][k] << ','
          << format_number(h.density[i][k]) << '\n';
    }
  }
  return out.str();
}

}  // namespace voipstat::app
