// Copyright 2026 The twopath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: calibrate, scan, fit, reproduce.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "twopath/commands.hpp"

namespace {

using namespace twopath;

constexpr int kExitValidation = 1;
constexpr int kExitFit = 2;

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

Scenario resolved_scenario(const std::string& config) {
  return calibrate(load_scenario(config));
}

std::vector<detection::ScanRecord> read_records(const std::string& path) {
  if (path == "-") return read_scan(std::cin);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_scan(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-path photon-pair interference simulator and fringe analysis"};
  app.require_subcommand(1);

  std::string config, out, format_name = "csv";
  std::optional<std::uint64_t> seed;

  auto* calib = app.add_subcommand("calibrate", "Resolve rate targets into a scenario with amplitudes");
  calib->add_option("--config", config, "Scenario YAML")->required();
  calib->add_option("--out", out, "Output YAML (default stdout)");

  auto* scan = app.add_subcommand("scan", "Simulate a delay scan");
  scan->add_option("--config", config, "Scenario YAML (targets are calibrated first)")->required();
  scan->add_option("--seed", seed, "Master seed (default scan.seed)");
  scan->add_option("--out", out, "Output file (default stdout)");
  scan->add_option("--format", format_name, "csv or json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}));

  std::string input, channel_name = "cc";
  std::optional<double> period_fs, window_ns, lo_hz, dc_hz, lo_sigma_hz;
  bool fix_period = false;
  int bootstrap = 0;
  auto* fit = app.add_subcommand("fit", "Fit a fringe to one channel of a scan");
  fit->add_option("input", input, "Scan CSV or JSON lines ('-' for stdin)")->required();
  fit->add_option("--config", config, "Scenario supplying period, window and reference rates");
  fit->add_option("--channel", channel_name, "cc, a or b");
  fit->add_option("--period-fs", period_fs, "Period guess (default pump period)");
  fit->add_flag("--fix-period", fix_period, "Hold the period at the guess");
  fit->add_option("--window-ns", window_ns, "Coincidence window for accidentals");
  fit->add_option("--lo-coinc-hz", lo_hz, "LO-alone coincidence rate");
  fit->add_option("--dc-coinc-hz", dc_hz, "DC-alone coincidence rate");
  fit->add_option("--lo-coinc-sigma-hz", lo_sigma_hz, "Uncertainty of the LO-alone rate");
  fit->add_option("--bootstrap", bootstrap, "Bootstrap resamples for visibility errors");
  fit->add_option("--seed", seed, "Bootstrap seed");
  fit->add_option("--out", out, "Report file (default stdout)");
  fit->add_option("--format", format_name, "csv (key = value text) or json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}));

  std::string figure_name_arg, scenario_dir = default_scenario_dir().string();
  std::string out_dir = "reproduce_out";
  auto* repro = app.add_subcommand("reproduce", "Regenerate a figure's scans and report");
  repro->add_option("figure", figure_name_arg, "fig3, fig4 or fig5")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5"}));
  repro->add_option("--out", out_dir, "Output directory");
  repro->add_option("--seed", seed, "Master seed (default scan.seed)");
  repro->add_option("--scenario-dir", scenario_dir, "Directory holding fig3/4/5.yaml");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const OutputFormat format = parse_format(format_name);
    if (*calib) {
      emit(out, cmd_calibrate(load_scenario(config)));
    } else if (*scan) {
      const Scenario sc = resolved_scenario(config);
      std::ostringstream buf;
      cmd_scan(sc, buf, format, seed);
      emit(out, buf.str());
    } else if (*fit) {
      FitRequest req;
      req.channel = analysis::parse_channel(channel_name);
      req.options.period_guess_s = PulseTrain{}.fringe_period_s();
      if (!config.empty()) {
        const Scenario sc = resolved_scenario(config);
        req.options.period_guess_s = sc.pulses().fringe_period_s();
        req.coinc_window_s = sc.detection.coinc_window_ns * 1e-9;
        req.lo_coinc_hz = sc.reference.lo_coinc_hz;
        req.dc_coinc_hz = sc.reference.dc_coinc_hz;
        req.lo_coinc_sigma_hz = sc.reference.lo_coinc_sigma_hz;
      }
      if (period_fs) req.options.period_guess_s = *period_fs * 1e-15;
      if (window_ns) req.coinc_window_s = *window_ns * 1e-9;
      if (lo_hz) req.lo_coinc_hz = *lo_hz;
      if (dc_hz) req.dc_coinc_hz = *dc_hz;
      if (lo_sigma_hz) req.lo_coinc_sigma_hz = *lo_sigma_hz;
      req.options.fix_period = fix_period;
      req.bootstrap_resamples = bootstrap;
      if (seed) req.bootstrap_seed = *seed;
      emit(out, format_fit_report(cmd_fit(read_records(input), req), format));
    } else if (*repro) {
      const auto result =
          cmd_reproduce(parse_figure(figure_name_arg), scenario_dir, out_dir, seed);
      for (const auto& c : result.checks) std::cout << format_check(c) << '\n';
      for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    }
  } catch (const analysis::FitError& e) {
    std::cerr << "fit failed: " << e.what() << '\n';
    return kExitFit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
