#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "voipstat/evt/gev.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::string values_file(const std::string& dir, const std::string& name, const std::vector<double>& v) {
  std::string text = "# sample\n";
  for (double x : v) text += std::to_string(x) + "\n";
  const std::string path = dir + "/" + name;
  write(path, text);
  return path;
}

std::string session_dir(const std::string& out) {
  for (const auto& e : fs::directory_iterator(out)) {
    if (e.is_directory() && e.path().filename().string().rfind("session_001_", 0) == 0) return e.path().string();
  }
  return {};
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_NE(clirun::run({}).exit_code, 0);
  EXPECT_NE(clirun::run({"bogus"}).exit_code, 0);
  EXPECT_NE(clirun::run({"fit"}).exit_code, 0);
  EXPECT_EQ(clirun::run({"--help"}).exit_code, 0);
}

TEST(Cli, AnalyzeEmptyCaptureWarnsAndSucceeds) {
  const std::string dir = oracle::temp_dir("cli_empty");
  write(dir + "/empty.jsonl", "");
  const auto r = clirun::run({"analyze", "-i", dir + "/empty.jsonl", "-o", dir + "/out"});
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir + "/out/index.json"));
}

TEST(Cli, AnalyzeBadMagicIsFatal) {
  const std::string dir = oracle::temp_dir("cli_magic");
  write(dir + "/bad.pcap", std::string(64, '\x42'));
  const auto r = clirun::run({"analyze", "-i", dir + "/bad.pcap", "-o", dir + "/out"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("BadMagic"), std::string::npos) << r.err;
}

TEST(Cli, AnalyzeStrayPacketsGivePartialExit) {
  const std::string dir = oracle::temp_dir("cli_residue");
  // A lone non-RTP, non-SIP datagram cannot be attributed to any call.
  write(dir + "/stray.jsonl",
        R"({"ts":1.0,"src":"10.1.1.1","dst":"10.1.1.2","sport":7,"dport":9,"proto":"udp","payload_hex":"00"})"
        "\n");
  const auto r = clirun::run({"analyze", "-i", dir + "/stray.jsonl", "-o", dir + "/out"});
  EXPECT_EQ(r.exit_code, 2) << r.err;
  const auto index = json::parse(clirun::slurp(dir + "/out/index.json"));
  EXPECT_EQ(index["residue"].size(), 1u);
}

TEST(Cli, FitTooFewPoints) {
  const std::string dir = oracle::temp_dir("cli_few");
  const auto path = values_file(dir, "five.txt", {1, 2, 3, 4, 5});
  const auto r = clirun::run({"fit", "-i", path});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("TooFewPoints"), std::string::npos) << r.err;
}

TEST(Cli, FitOpusJitterRowPrefersGevWithBoundedTail) {
  const std::string dir = oracle::temp_dir("cli_opus");
  const auto data = voipstat::evt::gev_sample({-0.321161, 2.45704, 6.84896}, 10000, 21);
  const auto path = values_file(dir, "opus.txt", data);
  const auto r = clirun::run({"fit", "-i", path, "--target", "jitter"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rep = json::parse(r.out);
  EXPECT_EQ(rep["ranking"][0]["family"], "GEV");
  EXPECT_LT(rep["gev"]["xi"].get<double>(), 0.0);
  EXPECT_EQ(rep["gev"]["tail"], "weibull");
}

TEST(Cli, FitG729RttRowHasHeavyTail) {
  const std::string dir = oracle::temp_dir("cli_g729");
  const auto data = voipstat::evt::gev_sample({0.1945, 50.1967, 176.0254}, 10000, 22);
  const auto path = values_file(dir, "g729.txt", data);
  const auto r = clirun::run({"fit", "-i", path, "--target", "rtt", "-o", dir + "/fit.json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rep = json::parse(clirun::slurp(dir + "/fit.json"));
  EXPECT_GT(rep["gev"]["xi"].get<double>(), 0.0);
  EXPECT_EQ(rep["target"], "rtt");
}

TEST(Cli, FitUnknownCandidateRejected) {
  const std::string dir = oracle::temp_dir("cli_cand");
  const auto path = values_file(dir, "v.txt", voipstat::evt::gev_sample({0, 1, 0}, 100, 1));
  EXPECT_NE(clirun::run({"fit", "-i", path, "--candidates", "gev,cauchy"}).exit_code, 0);
  EXPECT_EQ(clirun::run({"fit", "-i", path, "--candidates", "gev,normal"}).exit_code, 0);
}

TEST(Cli, SynthBadSpecFails) {
  const std::string dir = oracle::temp_dir("cli_badspec");
  write(dir + "/s.json", R"({"codec":"G711A"})");
  const auto r = clirun::run({"synth", "--spec", dir + "/s.json", "-o", dir + "/o.pcap"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("BadSpec"), std::string::npos) << r.err;
}

TEST(Cli, Spx16HeavyRttIsFlaggedExtreme) {
  const std::string dir = oracle::temp_dir("cli_spx16");
  write(dir + "/s.json", R"({"codec":"SPX-16","duration":30,"xr_interval":0.003,"seed":16,
    "rtt":{"xi":1.5807,"sigma":21.0076,"mu":139.0054},"call_id":"spx16@10.0.0.1"})");
  ASSERT_EQ(clirun::run({"synth", "--spec", dir + "/s.json", "-o", dir + "/c.pcap"}).exit_code, 0);
  write(dir + "/codecs.json", R"({"98":"SPX-16"})");
  const auto a = clirun::run({"analyze", "-i", dir + "/c.pcap", "-o", dir + "/out", "--codecs-map",
                              dir + "/codecs.json", "--targets", "rtt", "--candidates", "gev"});
  ASSERT_EQ(a.exit_code, 0) << a.err;
  const auto rep = json::parse(clirun::slurp(session_dir(dir + "/out") + "/report.json"));
  EXPECT_EQ(rep["codec"]["name"], "SPX-16");
  const auto& gev = rep["fits"]["rtt"]["gev"];
  EXPECT_GT(gev["xi"].get<double>(), 1.0);
  EXPECT_EQ(gev["extreme_shape"], true);
  EXPECT_EQ(gev["tail"], "frechet");
}

TEST(Cli, ClosedLoopTransitRecoversJitterModelShapeAndScale) {
  const std::string dir = oracle::temp_dir("cli_transit");
  // Transit relative to the first packet shifts the perturbation by its first
  // draw, so location is not comparable; shape and scale are.
  write(dir + "/s.json", R"({"codec":"G711A","duration":200,"seed":31,"bidirectional":false,
    "jitter":{"xi":-0.125761,"sigma":1.84636,"mu":7.27644},"call_id":"transit@10.0.0.1"})");
  ASSERT_EQ(clirun::run({"synth", "--spec", dir + "/s.json", "-o", dir + "/c.jsonl"}).exit_code, 0);
  const auto a = clirun::run({"analyze", "-i", dir + "/c.jsonl", "-o", dir + "/out", "--targets", "jitter"});
  ASSERT_EQ(a.exit_code, 0) << a.err;
  const auto f = clirun::run(
      {"fit", "-i", session_dir(dir + "/out") + "/transit.csv", "--candidates", "gev", "-o", dir + "/fit.json"});
  ASSERT_EQ(f.exit_code, 0) << f.err;
  const auto rep = json::parse(clirun::slurp(dir + "/fit.json"));
  EXPECT_GE(rep["n"].get<int>(), 9999);
  EXPECT_NEAR(rep["gev"]["xi"].get<double>(), -0.125761, 0.05);
  EXPECT_NEAR(rep["gev"]["sigma"].get<double>() / 1.84636, 1.0, 0.05);
}

TEST(Cli, LossRateFromSynthesizedCall) {
  const std::string dir = oracle::temp_dir("cli_loss");
  write(dir + "/s.json", R"({"codec":"GSM","duration":100,"loss":0.05,"seed":8,"call_id":"loss@10.0.0.1"})");
  ASSERT_EQ(clirun::run({"synth", "--spec", dir + "/s.json", "-o", dir + "/c.pcap"}).exit_code, 0);
  const auto a = clirun::run({"analyze", "-i", dir + "/c.pcap", "-o", dir + "/out", "--targets", "none"});
  ASSERT_EQ(a.exit_code, 0) << a.err;
  const auto rep = json::parse(clirun::slurp(session_dir(dir + "/out") + "/report.json"));
  const double loss = rep["streams"]["fwd"]["loss"]["loss_pct"].get<double>();
  // 5000 Bernoulli(0.05) draws: 5 percent with a standard error of 0.31.
  EXPECT_GT(loss, 3.8);
  EXPECT_LT(loss, 6.2);
}

TEST(Cli, ReportComparesAnalyzeOutput) {
  const std::string dir = oracle::temp_dir("cli_report");
  const std::string scen = std::string(VOIPSTAT_SCENARIOS) + "/g711a_call.json";
  ASSERT_EQ(clirun::run({"synth", "--spec", scen, "-o", dir + "/c.pcap"}).exit_code, 0);
  ASSERT_EQ(clirun::run({"analyze", "-i", dir + "/c.pcap", "-o", dir + "/out", "--scenario", "demo"}).exit_code, 0);
  const auto r = clirun::run({"report", "-i", dir + "/out"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto cmp = json::parse(r.out);
  EXPECT_EQ(cmp["reports"], 1);
  EXPECT_EQ(cmp["scenarios"][0]["scenario_tag"], "demo");
  EXPECT_EQ(cmp["scenarios"][0]["csd"]["median"], 1.392);
  EXPECT_EQ(clirun::run({"report", "-i", dir + "/missing"}).exit_code, 1);
}

TEST(Cli, GoldenFixtureMatchesCommittedReports) {
  // Expected output comes from tests/data/regenerate.sh; rerun it after an
  // intentional change to the analysis.
  const std::string data = VOIPSTAT_TEST_DATA;
  const std::string dir = oracle::temp_dir("cli_golden");
  const auto r = clirun::run({"analyze", "-i", data + "/golden.jsonl", "-o", dir, "--codecs-map",
                              data + "/codecs.json", "--seed", "42", "--scenario", "golden"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  int compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(data + "/golden")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), data + "/golden");
    EXPECT_EQ(clirun::slurp((fs::path(dir) / rel).string()), clirun::slurp(e.path().string())) << rel;
    ++compared;
  }
  EXPECT_EQ(compared, 3);
}
