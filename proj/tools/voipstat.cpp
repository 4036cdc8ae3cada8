// voipstat: VoIP capture analysis, distribution fitting and trace synthesis.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voipstat/app/analyze.hpp"
#include "voipstat/app/config.hpp"
#include "voipstat/app/fit.hpp"
#include "voipstat/app/report.hpp"
#include "voipstat/app/synth.hpp"
#include "voipstat/error.hpp"
#include "voipstat/evt/families.hpp"

namespace app = voipstat::app;

int main(int argc, char** argv) {
  CLI::App cli{"VoIP quality analysis: RTP/RTCP-XR/SIP metrics and extreme-value fits"};
  cli.require_subcommand(1);

  // analyze
  app::AnalysisConfig acfg;
  std::vector<std::string> a_inputs;
  std::string a_format, a_codecs, a_candidates = "all", a_targets = "jitter,rtt";
  std::string a_jitter_input = "sigma", a_xr_source = "all";
  std::string a_out;
  auto* analyze = cli.add_subcommand("analyze", "Assemble calls from captures and write per-session reports");
  analyze->add_option("--input,-i", a_inputs, "Capture files (pcap or jsonl)")->required();
  analyze->add_option("--format", a_format, "Input format: pcap|jsonl (default: by extension)");
  analyze->add_option("--out,-o", a_out, "Output directory")->required();
  analyze->add_option("--sigma-window", acfg.sigma_window, "Moving standard deviation window, seconds")
      ->capture_default_str();
  analyze->add_option("--bw-window", acfg.bw_window, "Bandwidth moving-average window, seconds")
      ->capture_default_str();
  analyze->add_option("--overhead", acfg.overhead_bytes, "Per-packet IP/UDP overhead bytes")->capture_default_str();
  analyze->add_option("--seed", acfg.seed, "Seed recorded in reports")->capture_default_str();
  analyze->add_option("--codecs-map", a_codecs, "JSON object mapping payload types to codec names");
  analyze->add_option("--candidates", a_candidates, "Comma-separated families or 'all'")->capture_default_str();
  analyze->add_option("--targets", a_targets, "Fit targets: jitter,rtt or none")->capture_default_str();
  analyze->add_option("--scenario", acfg.scenario_tag, "Scenario tag stored in every report");
  analyze->add_option("--jitter-input", a_jitter_input, "Jitter fit input: sigma|raw")->capture_default_str();
  analyze->add_option("--xr-source", a_xr_source, "XR reports used: all|fwd|rev")->capture_default_str();
  analyze->add_option("--bins", acfg.hist_bins, "Histogram bins per axis")->capture_default_str();

  // fit
  app::FitConfig fcfg;
  std::string f_input, f_target = "jitter", f_candidates = "all", f_out;
  auto* fit = cli.add_subcommand("fit", "Fit candidate distributions to a file of values");
  fit->add_option("--input,-i", f_input, "One value per line, or a t,value,unit CSV export")->required();
  fit->add_option("--target", f_target, "jitter|rtt")->capture_default_str();
  fit->add_option("--candidates", f_candidates, "Comma-separated families or 'all'")->capture_default_str();
  fit->add_option("--out,-o", f_out, "Report file (default: stdout)");

  // synth
  app::SynthConfig scfg;
  std::string s_spec, s_out, s_format;
  std::optional<std::uint64_t> s_seed;
  auto* synth = cli.add_subcommand("synth", "Generate a synthetic capture from a scenario file");
  synth->add_option("--spec,--input,-i", s_spec, "Scenario JSON")->required();
  synth->add_option("--out,-o", s_out, "Capture file to write")->required();
  synth->add_option("--format", s_format, "pcap|jsonl (default: by extension)");
  synth->add_option("--seed", s_seed, "Override the scenario seed");

  // report
  app::ReportConfig rcfg;
  std::vector<std::string> r_inputs;
  std::string r_out;
  auto* report = cli.add_subcommand("report", "Compare session reports grouped by scenario tag");
  report->add_option("--input,-i", r_inputs, "Report files or analyze output directories")->required();
  report->add_option("--out,-o", r_out, "Comparison file (default: stdout)");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (*analyze) {
      for (const auto& p : a_inputs) acfg.inputs.emplace_back(p);
      if (!a_format.empty()) acfg.format = app::parse_format(a_format);
      if (!a_codecs.empty()) acfg.codecs_map = a_codecs;
      acfg.candidates = voipstat::evt::parse_family_list(a_candidates);
      acfg.fit_targets = app::parse_targets(a_targets);
      acfg.jitter_input = app::parse_jitter_input(a_jitter_input);
      acfg.xr_source = app::parse_xr_source(a_xr_source);
      acfg.out_dir = a_out;
      return app::cmd_analyze(acfg, std::cerr);
    }
    if (*fit) {
      fcfg.input = f_input;
      fcfg.target = app::parse_target(f_target);
      fcfg.candidates = voipstat::evt::parse_family_list(f_candidates);
      if (!f_out.empty()) fcfg.out = f_out;
      return app::cmd_fit(fcfg, std::cout, std::cerr);
    }
    if (*synth) {
      scfg.spec = s_spec;
      scfg.out = s_out;
      if (!s_format.empty()) scfg.format = app::parse_format(s_format);
      scfg.seed = s_seed;
      return app::cmd_synth(scfg, std::cerr);
    }
    if (*report) {
      for (const auto& p : r_inputs) rcfg.inputs.emplace_back(p);
      if (!r_out.empty()) rcfg.out = r_out;
      return app::cmd_report(rcfg, std::cout, std::cerr);
    }
  } catch (const voipstat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
