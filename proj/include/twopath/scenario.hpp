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

#ifndef TWOPATH_SCENARIO_HPP
#define TWOPATH_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twopath/detection.hpp"
#include "twopath/optics.hpp"
#include "twopath/overlap.hpp"

namespace twopath {

inline constexpr int kScenarioSchemaVersion = 1;

/// Schema or value error in a scenario file.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Scenario fields keep the units of the file (the key suffix names them), so
// load/emit round trips are exact. Conversion to SI happens in model().

struct RateTargets {
  double singles_a_hz = 0.0;
  double singles_b_hz = 0.0;
  std::optional<double> coinc_hz;
};

/// Background-subtracted rates measured with one path blocked.
struct CalibrationTargets {
  RateTargets dc;
  RateTargets lo;
  double pump_phase_rad = 0.0;
};

struct ChainElementConfig {
  enum class Kind { kTap, kNd, kHwp, kPolarizer };
  Kind kind = Kind::kTap;
  /// transmission, optical density, or angle in degrees.
  double value = 0.0;
  /// Polarizer that takes the scenario's polarizer angle.
  bool scenario_polarizer = false;
};

struct LoChainConfig {
  optics::JonesVector input{{0.0, 0.0}, {1.0, 0.0}};
  std::vector<ChainElementConfig> elements;

  optics::ElementChain at_angle(double polarizer_deg) const;
};

/// Spectral description from which gamma_spectral is computed.
struct SpectraSpec {
  double center_nm = 810.0;
  double dc_fwhm_nm = 30.0;
  double lo_fwhm_nm = 30.0;
  std::optional<double> lo_center_nm;
  double filter_fwhm_nm = 10.0;
  double pump_fwhm_nm = 3.3;
};

struct EnvelopeConfig {
  enum class Mode { kOff, kSigma, kFilter };
  Mode mode = Mode::kFilter;
  double sigma_fs = 0.0;
  double filter_fwhm_nm = 10.0;
};

struct OverlapConfig {
  std::optional<double> gamma_spectral;
  std::optional<SpectraSpec> spectra;
  double gamma_spatial = 1.0;
  EnvelopeConfig envelope;
};

struct DetectionConfig {
  std::optional<double> eta_a;
  std::optional<double> eta_b;
  double lo_mode_match = 1.0;
  double dark_a_hz = 0.0;
  double dark_b_hz = 0.0;
  double background_a_hz = 0.0;
  double background_b_hz = 0.0;
  double coinc_window_ns = 1.07;
};

struct ScanSpec {
  double delay_start_fs = 0.0;
  double delay_stop_fs = 8.0;
  int n_points = 60;
  double integration_time_s = 10.0;
  std::uint64_t seed = 1;

  std::vector<double> delays_s() const;
};

/// Independent-path coincidence rates used by the fit report.
struct ReferenceRates {
  std::optional<double> lo_coinc_hz;
  std::optional<double> dc_coinc_hz;
  double lo_coinc_sigma_hz = 0.0;
};

/*
 * Everything needed to calibrate, simulate and analyze one experiment.
 * Exactly one of `source` (resolved amplitudes at the reference polarizer
 * angle) and `targets` (rates to calibrate from) is set.
 */
struct Scenario {
  std::string name;
  double rep_rate_hz = 80e6;
  double lo_wavelength_nm = 810.0;
  std::optional<SourceParams> source;
  std::optional<CalibrationTargets> targets;
  LoChainConfig lo_chain;
  double polarizer_angle_deg = 45.0;
  double reference_polarizer_deg = 45.0;
  OverlapConfig overlap;
  DetectionConfig detection;
  ScanSpec scan;
  ReferenceRates reference;
  std::vector<std::string> notes;

  bool resolved() const { return source.has_value(); }

  PulseTrain pulses() const;
  overlap::OverlapModel overlap_model() const;
  /// Requires eta_a and eta_b (a resolved scenario).
  detection::DetectionParams detection_params() const;
  /// LO amplitudes at `polarizer_deg` scaled from the reference-angle source.
  SourceParams source_at(double polarizer_deg) const;
  /// Physics at the given polarizer angle (default: the scenario's own).
  detection::ScanModel model(std::optional<double> polarizer_deg = std::nullopt) const;
};

Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string emit_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// gamma_spectral from filtered DC and LO spectra; warns on stderr when the
/// filter is too wide to erase frequency correlations.
double spectral_gamma(const SpectraSpec& spectra, bool warn = true);

/*
 * Resolves rate targets into amplitudes and efficiencies: Klyshko inversion
 * of the DC rates, LO mode-match from the LO coincidence target, then
 * calibrate_lo on the mode-matched part of the LO singles. A resolved
 * scenario is returned unchanged.
 */
Scenario calibrate(const Scenario& scenario);

}  // namespace twopath

#endif  // TWOPATH_SCENARIO_HPP
