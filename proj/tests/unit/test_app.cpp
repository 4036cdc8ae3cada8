#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "voipstat/app/analyze.hpp"
#include "voipstat/app/config.hpp"
#include "voipstat/app/export.hpp"
#include "voipstat/app/fit.hpp"
#include "voipstat/app/report.hpp"
#include "voipstat/app/schema.hpp"
#include "voipstat/app/synth.hpp"
#include "voipstat/error.hpp"
#include "voipstat/evt/gev.hpp"
#include "voipstat/ingest/jsonl.hpp"
#include "voipstat/ingest/pcap.hpp"
#include "voipstat/ingest/session.hpp"
#include "voipstat/metrics/metrics.hpp"

using namespace voipstat;
using namespace voipstat::app;
namespace fs = std::filesystem;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::Io;
}

Json g711_call(double duration = 60) {
  return Json{{"codec", "G711A"}, {"duration", duration}, {"seed", 5}, {"call_id", "unit@10.0.0.1"}};
}

ingest::AssemblyResult assemble(const std::vector<ingest::PacketRecord>& recs) {
  ingest::AssemblyConfig ac;
  return ingest::assemble_sessions(recs, ac);
}

}  // namespace

// ---- export ----

TEST(Export, FormatNumberRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> e(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::pow(10.0, e(rng)) * ((i % 2) ? -1 : 1);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(1.392), "1.392");
  EXPECT_EQ(format_number(0.1981), "0.1981");
  EXPECT_EQ(format_number(NAN), "nan");
}

TEST(Export, DumpNullsNonFiniteAndEndsWithNewline) {
  Json j;
  j["a"] = 1.5;
  j["b"] = NAN;
  j["c"] = Json::array({INFINITY, 2});
  j["d"] = Json{{"e", -INFINITY}};
  const std::string s = dump(j);
  EXPECT_EQ(s.back(), '\n');
  const auto back = Json::parse(s);
  EXPECT_EQ(back["a"], 1.5);
  EXPECT_TRUE(back["b"].is_null());
  EXPECT_TRUE(back["c"][0].is_null());
  EXPECT_EQ(back["c"][1], 2);
  EXPECT_TRUE(back["d"]["e"].is_null());
  // Insertion order is preserved.
  EXPECT_LT(s.find("\"a\""), s.find("\"b\""));
  EXPECT_LT(s.find("\"b\""), s.find("\"c\""));
}

TEST(Export, SeriesAndEcdfCsv) {
  metrics::MetricSeries s(metrics::MetricName::Rtt);
  s.push(1.0, 150);
  s.push(2.5, 120.25);
  EXPECT_EQ(series_csv(s), "t,value,unit\n1,150,ms\n2.5,120.25,ms\n");
  const std::vector<double> v{2, 1, 2, 3};
  const std::string c = ecdf_csv(stats::EmpiricalCdf(v), "ms");
  EXPECT_EQ(c, "x,cdf,unit\n1,0.25,ms\n2,0.75,ms\n3,1,ms\n");
  // A series export reads back through the fit input reader.
  EXPECT_EQ(read_values(series_csv(s)), (std::vector<double>{150, 120.25}));
}

// ---- schema validator ----

TEST(Schema, SubsetKeywords) {
  const Json schema = Json::parse(R"({
    "definitions": {"pos": {"type": "number", "minimum": 0}},
    "type": "object",
    "required": ["a", "b"],
    "additionalProperties": false,
    "properties": {
      "a": {"$ref": "#/definitions/pos"},
      "b": {"type": "array", "minItems": 1, "items": {"enum": ["x", "y"]}},
      "c": {"anyOf": [{"type": "string"}, {"type": "integer", "maximum": 3}]},
      "d": {"const": 7},
      "e": {"type": ["string", "null"]}
    }
  })");
  EXPECT_TRUE(validate_schema(Json::parse(R"({"a": 1, "b": ["x"], "c": 2, "d": 7, "e": null})"), schema).empty());
  EXPECT_TRUE(validate_schema(Json::parse(R"({"a": 0, "b": ["y", "x"], "c": "s"})"), schema).empty());

  const auto bad = [&](const char* doc) { return validate_schema(Json::parse(doc), schema); };
  EXPECT_FALSE(bad(R"({"a": -1, "b": ["x"]})").empty());
  EXPECT_FALSE(bad(R"({"a": 1})").empty());
  EXPECT_FALSE(bad(R"({"a": 1, "b": []})").empty());
  EXPECT_FALSE(bad(R"({"a": 1, "b": ["z"]})").empty());
  EXPECT_FALSE(bad(R"({"a": 1, "b": ["x"], "c": 4})").empty());
  EXPECT_FALSE(bad(R"({"a": 1, "b": ["x"], "c": 2.5})").empty());
  EXPECT_FALSE(bad(R"({"a": 1, "b": ["x"], "d": 8})").empty());
  EXPECT_FALSE(bad(R"({"a": 1, "b": ["x"], "zz": 1})").empty());
  EXPECT_FALSE(bad(R"({"a": 1, "b": ["x"], "e": 3})").empty());
  const auto msgs = bad(R"({"a": 1, "b": ["x", "q"]})");
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(msgs[0].rfind("/b/1", 0), 0u) << msgs[0];
}

TEST(Schema, ShippedSchemasAreObjects) {
  EXPECT_TRUE(session_report_schema().is_object());
  EXPECT_TRUE(fit_report_schema().is_object());
  EXPECT_TRUE(scenario_schema().is_object());
}

// ---- config ----

TEST(Config, FlagParsers) {
  EXPECT_EQ(parse_format("pcap"), InputFormat::Pcap);
  EXPECT_EQ(parse_format("jsonl"), InputFormat::Jsonl);
  EXPECT_EQ(code_of([] { parse_format("csv"); }), ErrorCode::BadInput);
  EXPECT_EQ(parse_targets("jitter,rtt"), (std::vector<FitTarget>{FitTarget::Jitter, FitTarget::Rtt}));
  EXPECT_EQ(parse_targets("rtt"), (std::vector<FitTarget>{FitTarget::Rtt}));
  EXPECT_EQ(code_of([] { parse_targets("jitter,loss"); }), ErrorCode::BadInput);
  EXPECT_EQ(parse_xr_source("rev"), XrSource::Rev);
  EXPECT_EQ(parse_jitter_input("raw"), JitterInput::Raw);
  EXPECT_EQ(to_string(FitTarget::Rtt), "rtt");
  EXPECT_EQ(detect_format("a/b.jsonl"), InputFormat::Jsonl);
  EXPECT_EQ(detect_format("a/b.pcap"), InputFormat::Pcap);
}

TEST(Config, Validate) {
  AnalysisConfig c;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::BadInput);
  c.inputs = {"x.pcap"};
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::BadInput);
  c.out_dir = "out";
  EXPECT_NO_THROW(c.validate());
  c.sigma_window = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::BadInput);
  c.sigma_window = 1;
  c.hist_bins = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::BadInput);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { read_file("/nonexistent/voipstat/file"); }), ErrorCode::Io);
}

// ---- fit input and report ----

TEST(FitInput, ReadValues) {
  EXPECT_EQ(read_values("# header\n1.5\n\n  2 \n-3e2\r\n"), (std::vector<double>{1.5, 2, -300}));
  EXPECT_TRUE(read_values("").empty());
  try {
    read_values("1\n2\nabc\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadInput);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { read_values("1\nnan\n"); }), ErrorCode::BadInput);
  EXPECT_EQ(code_of([] { read_values("t,value,unit\n1\n"); }), ErrorCode::BadInput);
}

TEST(FitReport, ValidatesAndRanks) {
  const auto data = evt::gev_sample({-0.321161, 2.45704, 6.84896}, 3000, 77);
  const Json r = fit_report(data, FitTarget::Jitter, evt::all_families());
  EXPECT_TRUE(validate_schema(r, fit_report_schema()).empty());
  EXPECT_EQ(r["target"], "jitter");
  EXPECT_EQ(r["n"], 3000);
  EXPECT_EQ(r["ranking"][0]["family"], "GEV");
  EXPECT_LT(r["gev"]["xi"].get<double>(), 0.0);
  double prev = -INFINITY;
  for (const auto& e : r["ranking"]) {
    EXPECT_GE(e["bic"].get<double>(), prev);
    prev = e["bic"].get<double>();
  }
  EXPECT_EQ(code_of([] { fit_report(std::vector<double>(5, 1.0), FitTarget::Rtt, evt::all_families()); }),
            ErrorCode::TooFewPoints);
}

// ---- scenarios and synthesis ----

TEST(Scenario, ParsesSingleAndMulti) {
  const auto one = parse_scenario(g711_call());
  ASSERT_EQ(one.calls.size(), 1u);
  EXPECT_EQ(one.calls[0].codec, ingest::Codec::G711A);
  EXPECT_EQ(one.calls[0].payload_type, 8);
  EXPECT_EQ(one.calls[0].seed, 5u);

  const auto multi = parse_scenario(Json{{"seed", 10}, {"calls", Json::array({Json{{"codec", "OPUS"}, {"duration", 1}},
                                                                             Json{{"codec", "GSM"}, {"duration", 2}}})}});
  ASSERT_EQ(multi.calls.size(), 2u);
  EXPECT_EQ(multi.calls[0].seed, 10u);
  EXPECT_EQ(multi.calls[1].seed, 11u);
  EXPECT_NE(multi.calls[0].caller.rtp_port, multi.calls[1].caller.rtp_port);
  EXPECT_EQ(parse_scenario(g711_call(), 99).calls[0].seed, 99u);
}

TEST(Scenario, RejectsBadSpecs) {
  auto bad = [](Json j) { return code_of([&] { parse_scenario(j); }); };
  EXPECT_EQ(bad(Json{{"duration", 1}}), ErrorCode::BadSpec);
  EXPECT_EQ(bad(Json{{"codec", "NOPE"}, {"duration", 1}}), ErrorCode::BadSpec);
  EXPECT_EQ(bad(Json{{"codec", "GSM"}, {"duration", 1}, {"loss", 1.0}}), ErrorCode::BadSpec);
  EXPECT_EQ(bad(Json{{"codec", "GSM"}, {"duration", 0}}), ErrorCode::BadSpec);
  EXPECT_EQ(bad(Json{{"codec", "GSM"}, {"duration", 1}, {"unknown_key", 1}}), ErrorCode::BadSpec);
  EXPECT_EQ(bad(Json{{"codec", "GSM"}, {"duration", 1}, {"rtt", Json{{"xi", 0}, {"sigma", -1}, {"mu", 1}}}}),
            ErrorCode::BadSpec);
  EXPECT_EQ(bad(Json{{"codec", "GSM"}, {"duration", 1}, {"sip", Json{{"ringing", 5}, {"ok", 4}}}}), ErrorCode::BadSpec);
  EXPECT_EQ(bad(Json{{"calls", Json::array()}}), ErrorCode::BadSpec);
}

TEST(Synth, DeterministicPerSeed) {
  Json spec = g711_call(5);
  spec["jitter"] = Json{{"xi", -0.1}, {"sigma", 2}, {"mu", 5}};
  spec["rtt"] = Json{{"xi", 0.2}, {"sigma", 10}, {"mu", 100}};
  spec["loss"] = 0.05;
  const auto a = synthesize(parse_scenario(spec));
  const auto b = synthesize(parse_scenario(spec));
  EXPECT_EQ(a, b);
  const auto c = synthesize(parse_scenario(spec, 6));
  EXPECT_NE(a, c);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(a[i - 1].ts, a[i].ts);
}

TEST(Synth, CleanG711CallHasExactCountsAndZeroJitter) {
  const auto recs = synthesize(parse_scenario(g711_call()));
  const auto res = assemble(recs);
  ASSERT_EQ(res.sessions.size(), 1u);
  EXPECT_TRUE(res.residue.empty());
  const auto& s = res.sessions[0];
  EXPECT_EQ(s.rtp_fwd.size(), 3000u);
  EXPECT_EQ(s.rtp_rev.size(), 3000u);
  EXPECT_EQ(s.clock_rate, 8000u);
  for (const auto* stream : {&s.rtp_fwd, &s.rtp_rev}) {
    const auto loss = metrics::loss_summary(*stream);
    EXPECT_EQ(loss.expected, 3000u);
    EXPECT_EQ(loss.loss_pct, 0.0);
    const auto j = metrics::jitter_series(*stream, s.clock_rate);
    for (const auto& smp : j.samples()) ASSERT_EQ(smp.v, 0.0);
  }
  const auto d = metrics::sip_delays(s.sip_dialog);
  ASSERT_TRUE(d.csd && d.sdd);
  EXPECT_EQ(*d.csd, 1.392);
  EXPECT_EQ(*d.sdd, 0.1981);
}

TEST(Synth, PcapAndJsonlCarrySameRecords) {
  const auto recs = synthesize(parse_scenario(g711_call(2)));
  EXPECT_EQ(ingest::parse_jsonl(ingest::write_jsonl(recs)), recs);
  EXPECT_EQ(ingest::parse_pcap(ingest::write_pcap(recs)), recs);
}

// ---- session analysis ----

TEST(Analyze, SessionReportValidatesAndHasExports) {
  Json spec = g711_call(20);
  spec["jitter"] = Json{{"xi", -0.2}, {"sigma", 2}, {"mu", 6}};
  spec["rtt"] = Json{{"xi", 0.2}, {"sigma", 12}, {"mu", 120}};
  spec["xr_interval"] = 0.05;
  const auto res = assemble(synthesize(parse_scenario(spec)));
  ASSERT_EQ(res.sessions.size(), 1u);
  AnalysisConfig cfg;
  cfg.inputs = {"mem.pcap"};
  cfg.out_dir = "unused";
  const auto out = analyze_session(res.sessions[0], cfg, 3, "mem.pcap");
  EXPECT_EQ(out.dir.rfind("session_003_", 0), 0u) << out.dir;
  const auto problems = validate_schema(out.report, session_report_schema());
  EXPECT_TRUE(problems.empty()) << (problems.empty() ? "" : problems.front());
  EXPECT_EQ(out.report["sip"]["csd"], 1.392);
  EXPECT_EQ(out.report["codec"]["name"], "G711-A");
  EXPECT_TRUE(out.report["fits"].contains("jitter"));
  EXPECT_TRUE(out.report["fits"].contains("rtt"));
  bool has_jitter_csv = false;
  for (const auto& [name, content] : out.files) {
    EXPECT_FALSE(content.empty()) << name;
    if (name == "jitter.csv") has_jitter_csv = content.rfind("t,value,unit\n", 0) == 0;
  }
  EXPECT_TRUE(has_jitter_csv);

  // Same input, same bytes.
  const auto again = analyze_session(res.sessions[0], cfg, 3, "mem.pcap");
  EXPECT_EQ(dump(again.report), dump(out.report));
  EXPECT_EQ(again.files, out.files);
}

TEST(Analyze, DriverWritesIndexAndReports) {
  const std::string dir = oracle::temp_dir("app_analyze");
  const auto recs = synthesize(parse_scenario(g711_call(3)));
  write_file(fs::path(dir) / "in.jsonl", ingest::write_jsonl(recs));
  AnalysisConfig cfg;
  cfg.inputs = {fs::path(dir) / "in.jsonl"};
  cfg.out_dir = fs::path(dir) / "out";
  cfg.fit_targets = {};
  std::ostringstream log;
  EXPECT_EQ(cmd_analyze(cfg, log), kExitOk) << log.str();
  const auto index = Json::parse(read_file(cfg.out_dir / "index.json"));
  EXPECT_EQ(index["input_packets"], recs.size());
  ASSERT_EQ(index["sessions"].size(), 1u);
  EXPECT_TRUE(fs::exists(cfg.out_dir / index["sessions"][0]["report"].get<std::string>()));
}

// ---- comparison ----

TEST(Report, CompareGroupsByScenarioTag) {
  auto make = [](const char* tag, double csd, const char* codec, double loss) {
    Json r;
    r["scenario_tag"] = tag;
    r["codec"] = Json{{"name", codec}};
    r["sip"] = Json{{"csd", csd}, {"sdd", 0.2}};
    r["streams"]["fwd"]["sigma_j"]["mean"] = 1.0;
    r["streams"]["fwd"]["loss"]["loss_pct"] = loss;
    r["xr"]["rtt"]["mean"] = 120.0;
    return r;
  };
  const std::vector<Json> reports{make("a", 1, "GSM", 1), make("a", 3, "GSM", 3), make("a", 2, "OPUS", 0),
                                  make("b", 5, "GSM", 2)};
  const Json c = compare_reports(reports);
  EXPECT_EQ(c["reports"], 4);
  ASSERT_EQ(c["scenarios"].size(), 2u);
  const Json& a = c["scenarios"][0];
  EXPECT_EQ(a["scenario_tag"], "a");
  EXPECT_EQ(a["sessions"], 3);
  EXPECT_EQ(a["csd"]["median"], 2.0);
  bool saw_gsm = false;
  for (const auto& e : a["loss_by_codec"]) {
    if (e["codec"] == "GSM") {
      saw_gsm = true;
      EXPECT_EQ(e["sessions"], 2);
      EXPECT_EQ(e["mean_loss_pct"], 2.0);
    }
  }
  EXPECT_TRUE(saw_gsm);
}
