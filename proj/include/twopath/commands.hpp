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

#ifndef TWOPATH_COMMANDS_HPP
#define TWOPATH_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twopath/analysis.hpp"
#include "twopath/scan_io.hpp"
#include "twopath/scenario.hpp"

namespace twopath {

/// Resolved scenario as YAML text.
std::string cmd_calibrate(const Scenario& scenario);

/// Simulates the scenario's scan. `seed` overrides scan.seed.
std::vector<detection::ScanRecord> cmd_scan(const Scenario& scenario, std::ostream& out,
                                            OutputFormat format,
                                            std::optional<std::uint64_t> seed = std::nullopt);

struct FitRequest {
  analysis::Channel channel = analysis::Channel::kCoincidence;
  analysis::FitOptions options;
  double coinc_window_s = 1.07e-9;
  std::optional<double> lo_coinc_hz;
  std::optional<double> dc_coinc_hz;
  double lo_coinc_sigma_hz = 0.0;
  int bootstrap_resamples = 0;
  std::uint64_t bootstrap_seed = 1;
};

struct FitReport {
  analysis::Channel channel = analysis::Channel::kCoincidence;
  std::size_t points = 0;
  analysis::FringeFit fit;
  analysis::VisibilityReport visibility;
  std::optional<analysis::VisibilityReport> bootstrap;
  std::optional<analysis::UpconversionReport> upconversion;
  std::optional<analysis::ExtremumCheck> enhancement;
  std::optional<analysis::ExtremumCheck> suppression;
};

/*
 * Fits one channel of a scan. Accidentals are taken from the singles columns
 * for the coincidence channel and are zero for a singles channel. The
 * upconversion and extremum blocks need both reference rates.
 */
FitReport cmd_fit(const std::vector<detection::ScanRecord>& records, const FitRequest& request);

/// key = value lines, or one JSON object for kJsonLines.
std::string format_fit_report(const FitReport& report, OutputFormat format);

enum class Figure { kFig3, kFig4, kFig5 };

Figure parse_figure(const std::string& name);
std::string figure_name(Figure figure);

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReproduceResult {
  std::vector<CheckLine> checks;
  std::vector<std::filesystem::path> files;

  bool all_passed() const;
};

std::filesystem::path default_scenario_dir();

/*
 * Runs one figure from `<scenario_dir>/<figure>.yaml` and writes scan CSVs,
 * the resolved scenario and a report with PASS/FAIL lines into out_dir.
 */
ReproduceResult cmd_reproduce(Figure figure, const std::filesystem::path& scenario_dir,
                              const std::filesystem::path& out_dir,
                              std::optional<std::uint64_t> seed = std::nullopt);

std::string format_check(const CheckLine& line);

}  // namespace twopath

#endif  // TWOPATH_COMMANDS_HPP
