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

#include "twopath/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "twopath/model.hpp"

namespace twopath {

namespace {

constexpr double kDeg = kPi / 180.0;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) fail(path, "expected a mapping");
}

void check_keys(const YAML::Node& node, const std::string& path,
                const std::set<std::string>& allowed) {
  require_map(node, path);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
  }
}

double as_double(const YAML::Node& node, const std::string& path) {
  try {
    const double v = node.as<double>();
    if (!std::isfinite(v)) fail(path, "value must be finite");
    return v;
  } catch (const YAML::Exception&) {
    fail(path, "expected a number");
  }
}

double req(const YAML::Node& parent, const std::string& key, const std::string& path) {
  const YAML::Node node = parent[key];
  if (!node) fail(path, "missing required key '" + key + "'");
  return as_double(node, path + "." + key);
}

std::optional<double> opt(const YAML::Node& parent, const std::string& key,
                          const std::string& path) {
  const YAML::Node node = parent[key];
  if (!node) return std::nullopt;
  return as_double(node, path + "." + key);
}

double opt_or(const YAML::Node& parent, const std::string& key, const std::string& path,
              double fallback) {
  return opt(parent, key, path).value_or(fallback);
}

ComplexValue as_complex(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() != 2) fail(path, "expected [re, im]");
  return {as_double(node[0], path + "[0]"), as_double(node[1], path + "[1]")};
}

RateTargets parse_rates(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"singles_a_hz", "singles_b_hz", "coinc_hz"});
  RateTargets r;
  r.singles_a_hz = req(node, "singles_a_hz", path);
  r.singles_b_hz = req(node, "singles_b_hz", path);
  r.coinc_hz = opt(node, "coinc_hz", path);
  if (r.singles_a_hz < 0.0 || r.singles_b_hz < 0.0 || (r.coinc_hz && *r.coinc_hz < 0.0))
    fail(path, "rates must be nonnegative");
  return r;
}

ChainElementConfig parse_element(const YAML::Node& node, const std::string& path) {
  require_map(node, path);
  if (node.size() != 1) fail(path, "each chain element is a single-key mapping");
  const auto key = node.begin()->first.as<std::string>();
  const YAML::Node value = node.begin()->second;
  ChainElementConfig e;
  if (key == "tap_transmission") {
    e.kind = ChainElementConfig::Kind::kTap;
  } else if (key == "nd_optical_density") {
    e.kind = ChainElementConfig::Kind::kNd;
  } else if (key == "hwp_axis_deg") {
    e.kind = ChainElementConfig::Kind::kHwp;
  } else if (key == "polarizer_deg") {
    e.kind = ChainElementConfig::Kind::kPolarizer;
    if (value.IsScalar() && value.as<std::string>() == "scenario") {
      e.scenario_polarizer = true;
      return e;
    }
  } else {
    fail(path, "unknown element '" + key + "'");
  }
  e.value = as_double(value, path + "." + key);
  return e;
}

EnvelopeConfig parse_envelope(const YAML::Node& node, const std::string& path) {
  EnvelopeConfig env;
  if (node.IsScalar()) {
    if (node.as<std::string>() != "off") fail(path, "expected 'off' or a mapping");
    env.mode = EnvelopeConfig::Mode::kOff;
    return env;
  }
  check_keys(node, path, {"sigma_fs", "filter_fwhm_nm"});
  if (node["sigma_fs"] && node["filter_fwhm_nm"]) fail(path, "give sigma_fs or filter_fwhm_nm, not both");
  if (node["sigma_fs"]) {
    env.mode = EnvelopeConfig::Mode::kSigma;
    env.sigma_fs = req(node, "sigma_fs", path);
    if (!(env.sigma_fs > 0.0)) fail(path + ".sigma_fs", "must be positive");
  } else {
    env.mode = EnvelopeConfig::Mode::kFilter;
    env.filter_fwhm_nm = req(node, "filter_fwhm_nm", path);
    if (!(env.filter_fwhm_nm > 0.0)) fail(path + ".filter_fwhm_nm", "must be positive");
  }
  return env;
}

SpectraSpec parse_spectra(const YAML::Node& node, const std::string& path) {
  check_keys(node, path,
             {"center_nm", "dc_fwhm_nm", "lo_fwhm_nm", "lo_center_nm", "filter_fwhm_nm",
              "pump_fwhm_nm"});
  SpectraSpec s;
  s.center_nm = req(node, "center_nm", path);
  s.dc_fwhm_nm = req(node, "dc_fwhm_nm", path);
  s.lo_fwhm_nm = req(node, "lo_fwhm_nm", path);
  s.lo_center_nm = opt(node, "lo_center_nm", path);
  s.filter_fwhm_nm = req(node, "filter_fwhm_nm", path);
  s.pump_fwhm_nm = req(node, "pump_fwhm_nm", path);
  for (double v : {s.center_nm, s.dc_fwhm_nm, s.lo_fwhm_nm, s.filter_fwhm_nm, s.pump_fwhm_nm})
    if (!(v > 0.0)) fail(path, "spectral parameters must be positive");
  return s;
}

void check_unit_interval(double v, const std::string& path, bool allow_zero) {
  if (!(v <= 1.0) || (allow_zero ? !(v >= 0.0) : !(v > 0.0)))
    fail(path, allow_zero ? "must lie in [0, 1]" : "must lie in (0, 1]");
}

// Shortest representation that parses back to the same double.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void emit_complex(YAML::Emitter& out, ComplexValue z) {
  out << YAML::Flow << YAML::BeginSeq << num(z.real()) << num(z.imag()) << YAML::EndSeq;
}

void emit_rates(YAML::Emitter& out, const RateTargets& r) {
  out << YAML::BeginMap;
  out << YAML::Key << "singles_a_hz" << YAML::Value << num(r.singles_a_hz);
  out << YAML::Key << "singles_b_hz" << YAML::Value << num(r.singles_b_hz);
  if (r.coinc_hz) out << YAML::Key << "coinc_hz" << YAML::Value << num(*r.coinc_hz);
  out << YAML::EndMap;
}

}  // namespace

optics::ElementChain LoChainConfig::at_angle(double polarizer_deg) const {
  optics::ElementChain chain;
  for (const auto& e : elements) {
    switch (e.kind) {
      case ChainElementConfig::Kind::kTap:
        chain.push_back(optics::Tap{e.value});
        break;
      case ChainElementConfig::Kind::kNd:
        chain.push_back(optics::Attenuator{e.value});
        break;
      case ChainElementConfig::Kind::kHwp:
        chain.push_back(optics::HalfWavePlate{e.value * kDeg});
        break;
      case ChainElementConfig::Kind::kPolarizer:
        chain.push_back(
            optics::Polarizer{(e.scenario_polarizer ? polarizer_deg : e.value) * kDeg});
        break;
    }
    optics::validate(chain.back());
  }
  return chain;
}

std::vector<double> ScanSpec::delays_s() const {
  return detection::linear_delays(delay_start_fs * 1e-15, delay_stop_fs * 1e-15, n_points);
}

PulseTrain Scenario::pulses() const {
  PulseTrain p = PulseTrain::from_lo_wavelength(rep_rate_hz, lo_wavelength_nm * 1e-9);
  p.validate();
  return p;
}

double spectral_gamma(const SpectraSpec& s, bool warn) {
  using overlap::GaussianSpectrum;
  const double nm = 1e-9;
  const auto filter = GaussianSpectrum::from_fwhm(s.center_nm * nm, s.filter_fwhm_nm * nm);
  const auto dc = GaussianSpectrum::from_fwhm(s.center_nm * nm, s.dc_fwhm_nm * nm);
  const auto lo = GaussianSpectrum::from_fwhm(s.lo_center_nm.value_or(s.center_nm) * nm,
                                              s.lo_fwhm_nm * nm);
  const double pump_center = s.center_nm * nm / 2.0;
  const double pump_fwhm_rad_s =
      2.0 * kPi * kSpeedOfLight * s.pump_fwhm_nm * nm / (pump_center * pump_center);
  if (warn && !overlap::correlations_erased(filter, pump_fwhm_rad_s)) {
    std::cerr << "warning: filter (" << s.filter_fwhm_nm
              << " nm) is not narrower than the pump bandwidth; down-conversion photons "
                 "may stay frequency-correlated and the single-mode overlap overestimates "
                 "gamma_spectral\n";
  }
  return overlap::gaussian_mode_overlap(overlap::filtered_spectrum(dc, filter),
                                        overlap::filtered_spectrum(lo, filter));
}

overlap::OverlapModel Scenario::overlap_model() const {
  overlap::OverlapModel m;
  if (overlap.spectra) {
    m.gamma_spectral = spectral_gamma(*overlap.spectra, false);
  } else {
    m.gamma_spectral = overlap.gamma_spectral.value_or(1.0);
  }
  m.gamma_spatial = overlap.gamma_spatial;
  switch (overlap.envelope.mode) {
    case EnvelopeConfig::Mode::kOff:
      break;
    case EnvelopeConfig::Mode::kSigma:
      m.envelope_sigma_s = overlap.envelope.sigma_fs * 1e-15;
      break;
    case EnvelopeConfig::Mode::kFilter:
      m.envelope_sigma_s =
          overlap::coherence_time_s(lo_wavelength_nm * 1e-9, overlap.envelope.filter_fwhm_nm * 1e-9);
      break;
  }
  m.validate();
  return m;
}

detection::DetectionParams Scenario::detection_params() const {
  if (!detection.eta_a || !detection.eta_b)
    throw ConfigError("detection: eta_a/eta_b unset; run calibrate first");
  detection::DetectionParams d;
  d.eta_a = *detection.eta_a;
  d.eta_b = *detection.eta_b;
  d.lo_mode_match = detection.lo_mode_match;
  d.dark_a_hz = detection.dark_a_hz;
  d.dark_b_hz = detection.dark_b_hz;
  d.background_a_hz = detection.background_a_hz;
  d.background_b_hz = detection.background_b_hz;
  d.coinc_window_s = detection.coinc_window_ns * 1e-9;
  d.rep_rate_hz = rep_rate_hz;
  d.integration_time_s = scan.integration_time_s;
  d.validate();
  return d;
}

SourceParams Scenario::source_at(double polarizer_deg) const {
  if (!source) throw ConfigError("scenario has no resolved source; run calibrate first");
  SourceParams src = *source;
  if (lo_chain.elements.empty()) return src;
  const auto ref = optics::propagate_chain(lo_chain.input, lo_chain.at_angle(reference_polarizer_deg));
  const auto now = optics::propagate_chain(lo_chain.input, lo_chain.at_angle(polarizer_deg));
  auto scale = [](ComplexValue alpha, ComplexValue ref_amp, ComplexValue now_amp, const char* pol) {
    if (alpha == ComplexValue{}) return alpha;
    if (std::abs(ref_amp) < 1e-300)
      throw ConfigError(std::string("lo_chain blocks the ") + pol +
                        " LO at the reference polarizer angle but the source amplitude is nonzero");
    return alpha * (now_amp / ref_amp);
  };
  src.alpha_h = scale(src.alpha_h, ref.h, now.h, "H");
  src.alpha_v = scale(src.alpha_v, ref.v, now.v, "V");
  return src;
}

detection::ScanModel Scenario::model(std::optional<double> polarizer_deg) const {
  detection::ScanModel m;
  m.source = source_at(polarizer_deg.value_or(polarizer_angle_deg));
  m.pulses = pulses();
  m.overlap = overlap_model();
  m.detection = detection_params();
  m.validate();
  return m;
}

Scenario parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("scenario is not valid YAML: ") + e.what());
  }
  check_keys(root, "scenario",
             {"schema_version", "name", "pulses", "source", "targets", "lo_chain",
              "polarizer_angle_deg", "reference_polarizer_deg", "overlap", "detection", "scan",
              "reference", "notes"});
  if (!root["schema_version"]) fail("scenario", "missing schema_version");
  if (root["schema_version"].as<int>() != kScenarioSchemaVersion)
    fail("scenario.schema_version",
         "unsupported version (expected " + std::to_string(kScenarioSchemaVersion) + ")");

  Scenario s;
  s.name = root["name"] ? root["name"].as<std::string>() : "";

  if (const auto p = root["pulses"]) {
    check_keys(p, "pulses", {"rep_rate_hz", "lo_wavelength_nm"});
    s.rep_rate_hz = req(p, "rep_rate_hz", "pulses");
    s.lo_wavelength_nm = req(p, "lo_wavelength_nm", "pulses");
  }

  if (root["source"] && root["targets"])
    fail("scenario", "give either 'source' amplitudes or calibration 'targets', not both");
  if (!root["source"] && !root["targets"])
    fail("scenario", "one of 'source' or 'targets' is required");

  if (const auto n = root["source"]) {
    check_keys(n, "source", {"epsilon", "pump_phase_rad", "alpha_h", "alpha_v"});
    SourceParams src;
    src.epsilon = req(n, "epsilon", "source");
    src.pump_phase = opt_or(n, "pump_phase_rad", "source", 0.0);
    if (n["alpha_h"]) src.alpha_h = as_complex(n["alpha_h"], "source.alpha_h");
    if (n["alpha_v"]) src.alpha_v = as_complex(n["alpha_v"], "source.alpha_v");
    if (src.epsilon < 0.0) fail("source.epsilon", "must be nonnegative");
    s.source = src;
  }
  if (const auto n = root["targets"]) {
    check_keys(n, "targets", {"dc", "lo", "pump_phase_rad"});
    if (!n["dc"] || !n["lo"]) fail("targets", "both 'dc' and 'lo' rate blocks are required");
    CalibrationTargets t;
    t.dc = parse_rates(n["dc"], "targets.dc");
    if (!t.dc.coinc_hz) fail("targets.dc", "coinc_hz is required");
    t.lo = parse_rates(n["lo"], "targets.lo");
    t.pump_phase_rad = opt_or(n, "pump_phase_rad", "targets", 0.0);
    s.targets = t;
  }

  if (const auto n = root["lo_chain"]) {
    check_keys(n, "lo_chain", {"input", "elements"});
    if (const auto in = n["input"]) {
      check_keys(in, "lo_chain.input", {"h", "v"});
      s.lo_chain.input.h = in["h"] ? as_complex(in["h"], "lo_chain.input.h") : ComplexValue{};
      s.lo_chain.input.v = in["v"] ? as_complex(in["v"], "lo_chain.input.v") : ComplexValue{};
    }
    if (const auto els = n["elements"]) {
      if (!els.IsSequence()) fail("lo_chain.elements", "expected a list");
      for (std::size_t i = 0; i < els.size(); ++i) {
        const std::string path = "lo_chain.elements[" + std::to_string(i) + "]";
        s.lo_chain.elements.push_back(parse_element(els[i], path));
      }
    }
  }
  s.polarizer_angle_deg = opt_or(root, "polarizer_angle_deg", "scenario", 45.0);
  s.reference_polarizer_deg = opt_or(root, "reference_polarizer_deg", "scenario", 45.0);

  if (const auto n = root["overlap"]) {
    check_keys(n, "overlap", {"gamma_spectral", "spectra", "gamma_spatial", "envelope"});
    if (n["gamma_spectral"] && n["spectra"])
      fail("overlap", "give gamma_spectral or spectra, not both");
    s.overlap.gamma_spectral = opt(n, "gamma_spectral", "overlap");
    if (s.overlap.gamma_spectral) check_unit_interval(*s.overlap.gamma_spectral, "overlap.gamma_spectral", true);
    if (n["spectra"]) s.overlap.spectra = parse_spectra(n["spectra"], "overlap.spectra");
    s.overlap.gamma_spatial = opt_or(n, "gamma_spatial", "overlap", 1.0);
    check_unit_interval(s.overlap.gamma_spatial, "overlap.gamma_spatial", true);
    if (n["envelope"]) s.overlap.envelope = parse_envelope(n["envelope"], "overlap.envelope");
  }

  if (const auto n = root["detection"]) {
    check_keys(n, "detection",
               {"eta_a", "eta_b", "lo_mode_match", "dark_a_hz", "dark_b_hz", "background_a_hz",
                "background_b_hz", "coinc_window_ns"});
    auto& d = s.detection;
    d.eta_a = opt(n, "eta_a", "detection");
    d.eta_b = opt(n, "eta_b", "detection");
    const auto mode_match = opt(n, "lo_mode_match", "detection");
    if (s.targets && (d.eta_a || d.eta_b || mode_match))
      fail("detection", "eta_a, eta_b and lo_mode_match are derived from targets; remove them");
    d.lo_mode_match = mode_match.value_or(1.0);
    if (d.eta_a) check_unit_interval(*d.eta_a, "detection.eta_a", false);
    if (d.eta_b) check_unit_interval(*d.eta_b, "detection.eta_b", false);
    check_unit_interval(d.lo_mode_match, "detection.lo_mode_match", false);
    d.dark_a_hz = opt_or(n, "dark_a_hz", "detection", 0.0);
    d.dark_b_hz = opt_or(n, "dark_b_hz", "detection", 0.0);
    d.background_a_hz = opt_or(n, "background_a_hz", "detection", 0.0);
    d.background_b_hz = opt_or(n, "background_b_hz", "detection", 0.0);
    d.coinc_window_ns = opt_or(n, "coinc_window_ns", "detection", 1.07);
    for (double v : {d.dark_a_hz, d.dark_b_hz, d.background_a_hz, d.background_b_hz, d.coinc_window_ns})
      if (v < 0.0) fail("detection", "rates and window must be nonnegative");
  }
  if (s.source && (!s.detection.eta_a || !s.detection.eta_b))
    fail("detection", "eta_a and eta_b are required with explicit source amplitudes");

  if (const auto n = root["scan"]) {
    check_keys(n, "scan",
               {"delay_start_fs", "delay_stop_fs", "n_points", "integration_time_s", "seed"});
    s.scan.delay_start_fs = req(n, "delay_start_fs", "scan");
    s.scan.delay_stop_fs = req(n, "delay_stop_fs", "scan");
    s.scan.n_points = n["n_points"] ? n["n_points"].as<int>() : 60;
    s.scan.integration_time_s = req(n, "integration_time_s", "scan");
    s.scan.seed = n["seed"] ? n["seed"].as<std::uint64_t>() : 1;
    if (s.scan.n_points < 0) fail("scan.n_points", "must be nonnegative");
    if (!(s.scan.integration_time_s > 0.0)) fail("scan.integration_time_s", "must be positive");
  }

  if (const auto n = root["reference"]) {
    check_keys(n, "reference", {"lo_coinc_hz", "dc_coinc_hz", "lo_coinc_sigma_hz"});
    s.reference.lo_coinc_hz = opt(n, "lo_coinc_hz", "reference");
    s.reference.dc_coinc_hz = opt(n, "dc_coinc_hz", "reference");
    s.reference.lo_coinc_sigma_hz = opt_or(n, "lo_coinc_sigma_hz", "reference", 0.0);
  }

  if (const auto n = root["notes"]) {
    if (!n.IsSequence()) fail("notes", "expected a list of strings");
    for (const auto& line : n) s.notes.push_back(line.as<std::string>());
  }

  // Surface physics errors (bad chain, wavelength relation) at load time.
  try {
    s.pulses();
    s.lo_chain.at_angle(s.polarizer_angle_deg);
    s.overlap_model();
    if (s.resolved()) s.model();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string emit_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << kScenarioSchemaVersion;
  out << YAML::Key << "name" << YAML::Value << s.name;
  if (!s.notes.empty()) {
    out << YAML::Key << "notes" << YAML::Value << YAML::BeginSeq;
    for (const auto& n : s.notes) out << YAML::DoubleQuoted << n;
    out << YAML::EndSeq;
  }

  out << YAML::Key << "pulses" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rep_rate_hz" << YAML::Value << num(s.rep_rate_hz);
  out << YAML::Key << "lo_wavelength_nm" << YAML::Value << num(s.lo_wavelength_nm);
  out << YAML::EndMap;

  if (s.source) {
    out << YAML::Key << "source" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "epsilon" << YAML::Value << num(s.source->epsilon);
    out << YAML::Key << "pump_phase_rad" << YAML::Value << num(s.source->pump_phase);
    out << YAML::Key << "alpha_h" << YAML::Value;
    emit_complex(out, s.source->alpha_h);
    out << YAML::Key << "alpha_v" << YAML::Value;
    emit_complex(out, s.source->alpha_v);
    out << YAML::EndMap;
  }
  if (s.targets) {
    out << YAML::Key << "targets" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dc" << YAML::Value;
    emit_rates(out, s.targets->dc);
    out << YAML::Key << "lo" << YAML::Value;
    emit_rates(out, s.targets->lo);
    out << YAML::Key << "pump_phase_rad" << YAML::Value << num(s.targets->pump_phase_rad);
    out << YAML::EndMap;
  }

  out << YAML::Key << "lo_chain" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "input" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "h" << YAML::Value;
  emit_complex(out, s.lo_chain.input.h);
  out << YAML::Key << "v" << YAML::Value;
  emit_complex(out, s.lo_chain.input.v);
  out << YAML::EndMap;
  out << YAML::Key << "elements" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : s.lo_chain.elements) {
    out << YAML::Flow << YAML::BeginMap;
    switch (e.kind) {
      case ChainElementConfig::Kind::kTap:
        out << YAML::Key << "tap_transmission" << YAML::Value << num(e.value);
        break;
      case ChainElementConfig::Kind::kNd:
        out << YAML::Key << "nd_optical_density" << YAML::Value << num(e.value);
        break;
      case ChainElementConfig::Kind::kHwp:
        out << YAML::Key << "hwp_axis_deg" << YAML::Value << num(e.value);
        break;
      case ChainElementConfig::Kind::kPolarizer:
        out << YAML::Key << "polarizer_deg" << YAML::Value;
        if (e.scenario_polarizer)
          out << "scenario";
        else
          out << num(e.value);
        break;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  out << YAML::Key << "polarizer_angle_deg" << YAML::Value << num(s.polarizer_angle_deg);
  out << YAML::Key << "reference_polarizer_deg" << YAML::Value << num(s.reference_polarizer_deg);

  out << YAML::Key << "overlap" << YAML::Value << YAML::BeginMap;
  if (s.overlap.gamma_spectral)
    out << YAML::Key << "gamma_spectral" << YAML::Value << num(*s.overlap.gamma_spectral);
  if (s.overlap.spectra) {
    const auto& sp = *s.overlap.spectra;
    out << YAML::Key << "spectra" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "center_nm" << YAML::Value << num(sp.center_nm);
    out << YAML::Key << "dc_fwhm_nm" << YAML::Value << num(sp.dc_fwhm_nm);
    out << YAML::Key << "lo_fwhm_nm" << YAML::Value << num(sp.lo_fwhm_nm);
    if (sp.lo_center_nm) out << YAML::Key << "lo_center_nm" << YAML::Value << num(*sp.lo_center_nm);
    out << YAML::Key << "filter_fwhm_nm" << YAML::Value << num(sp.filter_fwhm_nm);
    out << YAML::Key << "pump_fwhm_nm" << YAML::Value << num(sp.pump_fwhm_nm);
    out << YAML::EndMap;
  }
  out << YAML::Key << "gamma_spatial" << YAML::Value << num(s.overlap.gamma_spatial);
  out << YAML::Key << "envelope" << YAML::Value;
  switch (s.overlap.envelope.mode) {
    case EnvelopeConfig::Mode::kOff:
      out << "off";
      break;
    case EnvelopeConfig::Mode::kSigma:
      out << YAML::BeginMap << YAML::Key << "sigma_fs" << YAML::Value
          << num(s.overlap.envelope.sigma_fs) << YAML::EndMap;
      break;
    case EnvelopeConfig::Mode::kFilter:
      out << YAML::BeginMap << YAML::Key << "filter_fwhm_nm" << YAML::Value
          << num(s.overlap.envelope.filter_fwhm_nm) << YAML::EndMap;
      break;
  }
  out << YAML::EndMap;

  const auto& d = s.detection;
  out << YAML::Key << "detection" << YAML::Value << YAML::BeginMap;
  if (d.eta_a) out << YAML::Key << "eta_a" << YAML::Value << num(*d.eta_a);
  if (d.eta_b) out << YAML::Key << "eta_b" << YAML::Value << num(*d.eta_b);
  if (!s.targets) out << YAML::Key << "lo_mode_match" << YAML::Value << num(d.lo_mode_match);
  out << YAML::Key << "dark_a_hz" << YAML::Value << num(d.dark_a_hz);
  out << YAML::Key << "dark_b_hz" << YAML::Value << num(d.dark_b_hz);
  out << YAML::Key << "background_a_hz" << YAML::Value << num(d.background_a_hz);
  out << YAML::Key << "background_b_hz" << YAML::Value << num(d.background_b_hz);
  out << YAML::Key << "coinc_window_ns" << YAML::Value << num(d.coinc_window_ns);
  out << YAML::EndMap;

  out << YAML::Key << "scan" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "delay_start_fs" << YAML::Value << num(s.scan.delay_start_fs);
  out << YAML::Key << "delay_stop_fs" << YAML::Value << num(s.scan.delay_stop_fs);
  out << YAML::Key << "n_points" << YAML::Value << s.scan.n_points;
  out << YAML::Key << "integration_time_s" << YAML::Value << num(s.scan.integration_time_s);
  out << YAML::Key << "seed" << YAML::Value << s.scan.seed;
  out << YAML::EndMap;

  if (s.reference.lo_coinc_hz || s.reference.dc_coinc_hz || s.reference.lo_coinc_sigma_hz != 0.0) {
    out << YAML::Key << "reference" << YAML::Value << YAML::BeginMap;
    if (s.reference.lo_coinc_hz)
      out << YAML::Key << "lo_coinc_hz" << YAML::Value << num(*s.reference.lo_coinc_hz);
    if (s.reference.dc_coinc_hz)
      out << YAML::Key << "dc_coinc_hz" << YAML::Value << num(*s.reference.dc_coinc_hz);
    out << YAML::Key << "lo_coinc_sigma_hz" << YAML::Value << num(s.reference.lo_coinc_sigma_hz);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  if (!out.good()) throw ConfigError(std::string("emit_scenario: ") + out.GetLastError());
  return std::string(out.c_str()) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << emit_scenario(scenario);
  if (!file) throw std::runtime_error("write failed for " + path.string());
}

Scenario calibrate(const Scenario& in) {
  if (in.resolved()) return in;
  if (!in.targets) throw ConfigError("calibrate: scenario has neither source nor targets");
  const CalibrationTargets& t = *in.targets;
  const PulseTrain pulses = in.pulses();

  KlyshkoResult k;
  try {
    k = klyshko_calibrate(t.dc.singles_a_hz, t.dc.singles_b_hz, *t.dc.coinc_hz, pulses);
  } catch (const std::invalid_argument& e) {
    throw InconsistentRatesError(std::string("targets.dc: ") + e.what());
  }

  double mode_match = 1.0;
  const bool lo_on = t.lo.singles_a_hz > 0.0 || t.lo.singles_b_hz > 0.0;
  if (t.lo.coinc_hz && *t.lo.coinc_hz > 0.0) {
    if (!(t.lo.singles_a_hz > 0.0 && t.lo.singles_b_hz > 0.0))
      throw InconsistentRatesError("targets.lo: coincidence target with a zero singles target");
    const double ceiling = t.lo.singles_a_hz * t.lo.singles_b_hz / pulses.rep_rate_hz;
    if (*t.lo.coinc_hz > ceiling) {
      std::ostringstream msg;
      msg << "targets.lo: coincidence rate " << *t.lo.coinc_hz
          << " Hz exceeds the uncorrelated-light maximum S_A*S_B/f_rep = " << ceiling << " Hz";
      throw InconsistentRatesError(msg.str());
    }
    mode_match = std::sqrt(*t.lo.coinc_hz / ceiling);
  }
  const LoAmplitudes amps = calibrate_lo(mode_match * t.lo.singles_a_hz,
                                         mode_match * t.lo.singles_b_hz, k.eta_a, k.eta_b, pulses);

  Scenario out = in;
  out.targets.reset();
  SourceParams src;
  src.epsilon = k.epsilon;
  src.pump_phase = t.pump_phase_rad;
  src.alpha_h = amps.alpha_h_abs;
  src.alpha_v = amps.alpha_v_abs;
  out.source = src;
  out.detection.eta_a = k.eta_a;
  out.detection.eta_b = k.eta_b;
  out.detection.lo_mode_match = mode_match;
  if (!out.reference.dc_coinc_hz) out.reference.dc_coinc_hz = *t.dc.coinc_hz;
  if (!out.reference.lo_coinc_hz && lo_on) {
    out.reference.lo_coinc_hz =
        t.lo.coinc_hz.value_or(k.eta_a * k.eta_b * pulses.rep_rate_hz *
                               std::pow(amps.alpha_h_abs * amps.alpha_v_abs, 2));
  }

  auto fmt = [](double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
  };
  out.notes.push_back("calibrated: epsilon = sqrt(S_A*S_B/(R_cc*f_rep)) from DC targets " +
                      fmt(t.dc.singles_a_hz) + "/" + fmt(t.dc.singles_b_hz) + "/" +
                      fmt(*t.dc.coinc_hz) + " Hz -> " + fmt(k.epsilon));
  out.notes.push_back("calibrated: eta_a = R_cc/S_B = " + fmt(k.eta_a) +
                      ", eta_b = R_cc/S_A = " + fmt(k.eta_b));
  out.notes.push_back("calibrated: lo_mode_match = " + fmt(mode_match) + " from LO targets " +
                      fmt(t.lo.singles_a_hz) + "/" + fmt(t.lo.singles_b_hz) + "/" +
                      (t.lo.coinc_hz ? fmt(*t.lo.coinc_hz) : std::string("-")) + " Hz");
  out.notes.push_back("calibrated: |alpha_h| = " + fmt(amps.alpha_h_abs) + ", |alpha_v| = " +
                      fmt(amps.alpha_v_abs) + " at polarizer " + fmt(in.reference_polarizer_deg) +
                      " deg");

  // Fails here rather than later if the reference angle blocks a calibrated LO.
  try {
    out.model();
  } catch (const PerturbativeBoundError& e) {
    throw ConfigError(std::string("calibrate: ") + e.what());
  }
  return out;
}

}  // namespace twopath
