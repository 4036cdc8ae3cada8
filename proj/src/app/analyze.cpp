#include "voipstat/app/analyze.hpp"

#include <cctype>
#include <cstdio>
#include <exception>
#include <optional>

#include "voipstat/app/schema.hpp"
#include "voipstat/error.hpp"
#include "voipstat/evt/select.hpp"
#include "voipstat/metrics/metrics.hpp"
#include "voipstat/stats/boxplot.hpp"
#include "voipstat/stats/ecdf.hpp"
#include "voipstat/stats/histogram.hpp"
#include "voipstat/stats/pca.hpp"

namespace voipstat::app {

namespace {

using metrics::MetricName;
using metrics::MetricSeries;

std::string sanitize(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(keep ? c : '_');
    if (out.size() == 48) break;
  }
  return out.empty() ? "session" : out;
}

AxisLabel label(MetricName name) {
  return {std::string(metrics::to_string(name)), std::string(metrics::to_string(metrics::unit_of(name)))};
}

struct StreamMetrics {
  Json json;
  std::optional<MetricSeries> jitter;
  std::optional<MetricSeries> sigma_j;
  std::optional<MetricSeries> transit;
  MetricSeries bandwidth{MetricName::Bandwidth};
};

StreamMetrics stream_metrics(std::span<const ingest::RtpPacket> stream, std::uint32_t clock_rate,
                             const AnalysisConfig& cfg, const std::string& src, const std::string& dst) {
  StreamMetrics m;
  Json& j = m.json;
  j["ssrc"] = stream.empty() ? Json(nullptr) : Json(stream.front().ssrc);
  j["src"] = src;
  j["dst"] = dst;
  j["packets"] = stream.size();
  j["loss"] = to_json(metrics::loss_summary(stream));
  if (clock_rate > 0 && stream.size() >= 2) {
    m.jitter = metrics::jitter_series(stream, clock_rate);
    m.sigma_j = metrics::moving_std(*m.jitter, cfg.sigma_window, MetricName::SigmaJ);
    m.transit = metrics::transit_series(stream, clock_rate);
  }
  m.bandwidth = metrics::bandwidth_series(stream, cfg.bw_window, cfg.overhead_bytes);
  auto summary = [](const std::optional<MetricSeries>& s) {
    return s ? to_json(metrics::summarize(*s)) : Json(nullptr);
  };
  j["jitter"] = summary(m.jitter);
  j["sigma_j"] = summary(m.sigma_j);
  j["transit"] = summary(m.transit);
  j["bandwidth"] = to_json(metrics::summarize(m.bandwidth));
  return m;
}

Json fit_block(const std::vector<double>& values, const std::string& input, const AnalysisConfig& cfg) {
  Json j;
  j["input"] = input;
  j["n"] = values.size();
  if (values.size() < evt::kMinFitPoints) {
    j["skipped"] = "fewer than " + std::to_string(evt::kMinFitPoints) + " values";
    j["gev"] = nullptr;
    j["ranking"] = Json::array();
    j["excluded"] = Json::array();
    return j;
  }
  const Json sel = to_json(evt::select_model(values, cfg.candidates));
  for (auto it = sel.begin(); it != sel.end(); ++it) j[it.key()] = it.value();
  return j;
}

// Pairs each sample of `a` with the latest sample of `b` at or before it.
std::pair<std::vector<double>, std::vector<double>> align(const MetricSeries& a, const MetricSeries& b) {
  std::pair<std::vector<double>, std::vector<double>> out;
  for (const auto& s : a.samples()) {
    if (auto v = metrics::value_at(b, s.t)) {
      out.first.push_back(s.v);
      out.second.push_back(*v);
    }
  }
  return out;
}

}  // namespace

SessionOutput analyze_session(const ingest::CallSession& session, const AnalysisConfig& cfg, std::size_t index,
                              const std::string& source) {
  SessionOutput out;
  char prefix[32];
  std::snprintf(prefix, sizeof prefix, "session_%03zu_", index);
  out.dir = prefix + sanitize(session.session_id);

  Json& r = out.report;
  r["schema"] = "voipstat.session_report/1";
  r["session_id"] = session.session_id;
  r["source"] = source;
  r["scenario_tag"] = session.scenario_tag;
  if (session.codec) {
    const auto& info = ingest::codec_info(*session.codec);
    r["codec"] = Json{{"name", std::string(info.name)},
                      {"algorithm", std::string(info.algorithm)},
                      {"clock_rate_hz", info.clock_rate_hz},
                      {"bitrate_kbps", Json::array({info.bitrate_min_kbps, info.bitrate_max_kbps})}};
  } else {
    r["codec"] = nullptr;
  }
  r["packets"] = Json{{"rtp_fwd", session.rtp_fwd.size()},
                      {"rtp_rev", session.rtp_rev.size()},
                      {"rtcp", session.rtcp_packets},
                      {"sip", session.sip_dialog.size()},
                      {"total", session.packet_count()}};
  r["config"] = Json{{"sigma_window", cfg.sigma_window},
                     {"bw_window", cfg.bw_window},
                     {"overhead_bytes", cfg.overhead_bytes},
                     {"seed", cfg.seed},
                     {"hist_bins", cfg.hist_bins},
                     {"jitter_input", std::string(to_string(cfg.jitter_input))},
                     {"xr_source", std::string(to_string(cfg.xr_source))}};

  // Streams.
  std::string rev_src, rev_dst;
  if (!session.rtp_rev.empty()) {
    rev_src = session.fwd_dst;
    rev_dst = session.fwd_src;
  }
  StreamMetrics fwd = stream_metrics(session.rtp_fwd, session.clock_rate, cfg, session.fwd_src, session.fwd_dst);
  Json streams;
  streams["fwd"] = fwd.json;
  streams["rev"] = session.rtp_rev.empty()
                       ? Json(nullptr)
                       : stream_metrics(session.rtp_rev, session.clock_rate, cfg, rev_src, rev_dst).json;
  r["streams"] = streams;

  // RTCP-XR.
  std::vector<ingest::VoipMetricsBlock> blocks;
  const auto fwd_ssrc = session.fwd_ssrc();
  const auto rev_ssrc = session.rev_ssrc();
  for (const auto& b : session.xr_blocks) {
    if (cfg.xr_source == XrSource::Fwd && (!fwd_ssrc || b.source_ssrc != *fwd_ssrc)) continue;
    if (cfg.xr_source == XrSource::Rev && (!rev_ssrc || b.source_ssrc != *rev_ssrc)) continue;
    blocks.push_back(b);
  }
  const MetricSeries rtt = metrics::rtt_series(blocks);
  const MetricSeries rf = metrics::xr_metric_series(blocks, metrics::XrField::RFactor);
  const MetricSeries sl = metrics::xr_metric_series(blocks, metrics::XrField::SignalLevel);
  const MetricSeries sigma_sl =
      sl.empty() ? MetricSeries(MetricName::SigmaSl) : metrics::moving_std(sl, cfg.sigma_window, MetricName::SigmaSl);
  r["xr"] = Json{{"blocks", blocks.size()},
                 {"rtt", to_json(metrics::summarize(rtt))},
                 {"r_factor", to_json(metrics::summarize(rf))},
                 {"signal_level", to_json(metrics::summarize(sl))},
                 {"sigma_sl", to_json(metrics::summarize(sigma_sl))}};

  // SIP.
  Json sip = to_json(metrics::sip_delays(session.sip_dialog));
  sip["call_id"] = session.sip_dialog.empty() ? Json(nullptr) : Json(session.sip_dialog.front().call_id);
  sip["messages"] = session.sip_dialog.size();
  r["sip"] = sip;

  // Fits.
  Json fits = Json::object();
  for (FitTarget t : cfg.fit_targets) {
    if (t == FitTarget::Jitter) {
      const bool raw = cfg.jitter_input == JitterInput::Raw;
      const auto& src = raw ? fwd.jitter : fwd.sigma_j;
      fits["jitter"] = fit_block(src ? src->values() : std::vector<double>{}, raw ? "jitter" : "sigma_j", cfg);
    } else {
      fits["rtt"] = fit_block(rtt.values(), "rtt", cfg);
    }
  }
  r["fits"] = fits;

  // Exports.
  Json exports;
  Json series = Json::object();
  auto add_series = [&](const MetricSeries& s, const std::string& file) {
    out.files.emplace_back(file, series_csv(s));
    series[std::string(metrics::to_string(s.name()))] = file;
  };
  if (fwd.jitter) add_series(*fwd.jitter, "jitter.csv");
  if (fwd.sigma_j) add_series(*fwd.sigma_j, "sigma_j.csv");
  if (fwd.transit) add_series(*fwd.transit, "transit.csv");
  add_series(fwd.bandwidth, "bandwidth.csv");
  add_series(rtt, "rtt.csv");
  add_series(rf, "r_factor.csv");
  add_series(sl, "signal_level.csv");
  add_series(sigma_sl, "sigma_sl.csv");
  exports["series"] = series;

  Json hists = Json::object();
  if (fwd.sigma_j) {
    auto add_hist = [&](const MetricSeries& anchor, const MetricSeries& other, bool anchor_is_x) {
      auto [a, b] = align(anchor, other);
      if (a.empty()) return;
      const MetricSeries& xs = anchor_is_x ? anchor : other;
      const MetricSeries& ys = anchor_is_x ? other : anchor;
      const auto& xv = anchor_is_x ? a : b;
      const auto& yv = anchor_is_x ? b : a;
      const auto h = stats::bivariate_hist(xv, yv, cfg.hist_bins, cfg.hist_bins);
      const std::string base =
          "hist_" + std::string(metrics::to_string(xs.name())) + "_" + std::string(metrics::to_string(ys.name()));
      out.files.emplace_back(base + ".json", dump(to_json(h, label(xs.name()), label(ys.name()))));
      out.files.emplace_back(base + ".csv", hist_csv(h));
      hists[base.substr(5)] = Json{{"json", base + ".json"}, {"csv", base + ".csv"}, {"points", xv.size()}};
    };
    add_hist(*fwd.sigma_j, fwd.bandwidth, false);
    add_hist(rtt, *fwd.sigma_j, true);
    add_hist(rf, *fwd.sigma_j, true);
  }
  exports["histograms"] = hists;

  Json cdfs = Json::object();
  auto add_cdf = [&](const MetricSeries& s) {
    if (s.empty()) return;
    const std::string name(metrics::to_string(s.name()));
    out.files.emplace_back("cdf_" + name + ".csv",
                           ecdf_csv(stats::empirical_cdf(s.values()), metrics::to_string(s.unit())));
    cdfs[name] = "cdf_" + name + ".csv";
  };
  if (fwd.sigma_j) add_cdf(*fwd.sigma_j);
  add_cdf(sigma_sl);
  exports["cdfs"] = cdfs;

  Json boxes = Json::object();
  auto add_box = [&](const MetricSeries& s) {
    if (!s.empty()) boxes[std::string(metrics::to_string(s.name()))] = to_json(stats::boxplot_stats(s.values()));
  };
  if (fwd.jitter) add_box(*fwd.jitter);
  if (fwd.sigma_j) add_box(*fwd.sigma_j);
  add_box(fwd.bandwidth);
  add_box(rtt);
  add_box(rf);
  add_box(sl);
  out.files.emplace_back("boxplots.json", dump(boxes));
  exports["boxplots"] = "boxplots.json";

  // PCA over the four quality variables sampled at the XR report times.
  Json pca_ref = nullptr;
  if (fwd.sigma_j) {
    stats::Matrix rows;
    for (const auto& s : rf.samples()) {
      const auto bw = metrics::value_at(fwd.bandwidth, s.t);
      const auto sj = metrics::value_at(*fwd.sigma_j, s.t);
      const auto d = metrics::value_at(rtt, s.t);
      if (bw && sj && d) rows.push_back({s.v, *bw, *sj, *d});
    }
    const AxisLabel vars[] = {label(MetricName::RFactor), label(MetricName::Bandwidth), label(MetricName::SigmaJ),
                              label(MetricName::Rtt)};
    try {
      const auto p = stats::pca(rows, 3, true);
      out.files.emplace_back("pca.json", dump(to_json(p, vars)));
      pca_ref = "pca.json";
    } catch (const Error&) {
      // Too few report times or a constant variable; no decomposition.
    }
  }
  exports["pca"] = pca_ref;
  r["exports"] = exports;
  return out;
}

int cmd_analyze(const AnalysisConfig& config, std::ostream& log) {
  try {
    config.validate();
    ingest::AssemblyConfig ac;
    ac.payload_types = load_payload_types(config.codecs_map);
    ac.scenario_tag = config.scenario_tag;

    struct Item {
      std::string source;
      ingest::CallSession session;
    };
    std::vector<Item> items;
    Json residue = Json::array();
    Json inputs = Json::array();
    std::size_t input_packets = 0;
    for (const auto& path : config.inputs) {
      const InputFormat fmt = config.format.value_or(detect_format(path));
      const auto records = load_records(path, fmt);
      auto res = ingest::assemble_sessions(records, ac);
      const std::string source = path.filename().string();
      inputs.push_back(Json{{"file", source}, {"format", std::string(to_string(fmt))}, {"packets", records.size()}});
      input_packets += records.size();
      for (const auto& e : res.residue) {
        residue.push_back(Json{{"input", source}, {"record", e.record_index}, {"reason", e.reason}});
      }
      for (auto& s : res.sessions) items.push_back({source, std::move(s)});
    }

    std::vector<SessionOutput> outputs(items.size());
    std::vector<std::string> failures(items.size());
    const int n = static_cast<int>(items.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) {
      try {
        outputs[i] = analyze_session(items[i].session, config, static_cast<std::size_t>(i) + 1, items[i].source);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!failures[i].empty()) {
        log << "error: session " << items[i].session.session_id << ": " << failures[i] << "\n";
        return kExitFatal;
      }
    }

    Json index;
    index["schema"] = "voipstat.index/1";
    index["inputs"] = inputs;
    index["input_packets"] = input_packets;
    Json sessions = Json::array();
    for (const auto& o : outputs) {
      const auto problems = validate_schema(o.report, session_report_schema());
      if (!problems.empty()) {
        log << "error: report for " << o.dir << " violates the schema: " << problems.front() << "\n";
        return kExitFatal;
      }
      const auto dir = config.out_dir / o.dir;
      for (const auto& [name, content] : o.files) write_file(dir / name, content);
      write_file(dir / "report.json", dump(o.report));
      sessions.push_back(Json{{"session_id", o.report["session_id"]},
                              {"dir", o.dir},
                              {"scenario_tag", o.report["scenario_tag"]},
                              {"report", o.dir + "/report.json"}});
    }
    index["sessions"] = sessions;
    index["residue"] = residue;
    write_file(config.out_dir / "index.json", dump(index));

    if (items.empty()) log << "warning: no call sessions found in the input\n";
    if (!residue.empty()) {
      log << "warning: " << residue.size() << " packet(s) not attributed to any session (see index.json)\n";
      return kExitPartial;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFatal;
  }
}

}  // namespace voipstat::app
