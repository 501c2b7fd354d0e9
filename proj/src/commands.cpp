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

#include "twopath/commands.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "twopath/random.hpp"

namespace twopath {

namespace fs = std::filesystem;
using analysis::Channel;

std::string cmd_calibrate(const Scenario& scenario) { return emit_scenario(calibrate(scenario)); }

std::vector<detection::ScanRecord> cmd_scan(const Scenario& scenario, std::ostream& out,
                                            OutputFormat format,
                                            std::optional<std::uint64_t> seed) {
  if (!scenario.resolved())
    throw ConfigError("scan needs a resolved scenario (run calibrate first)");
  const auto model = scenario.model();
  const auto delays = scenario.scan.delays_s();
  const auto records = detection::simulate_scan(delays, model, seed.value_or(scenario.scan.seed));
  write_scan(out, records, format);
  if (!out) throw std::runtime_error("failed writing scan output");
  return records;
}

FitReport cmd_fit(const std::vector<detection::ScanRecord>& records, const FitRequest& request) {
  FitReport rep;
  rep.channel = request.channel;
  rep.points = records.size();
  rep.fit = analysis::fit_fringe(records, request.channel, request.options);

  const bool coinc = request.channel == Channel::kCoincidence;
  const double acc =
      coinc ? analysis::accidentals_from_records(records, request.coinc_window_s) : 0.0;
  rep.visibility = analysis::visibility(rep.fit, acc);

  if (request.bootstrap_resamples > 0) {
    const auto samples = analysis::to_samples(records, request.channel);
    rep.bootstrap = analysis::bootstrap_visibility(samples, request.options, acc,
                                                   request.bootstrap_resamples,
                                                   request.bootstrap_seed);
  }
  if (coinc && request.lo_coinc_hz && request.dc_coinc_hz) {
    const double lo = *request.lo_coinc_hz;
    const double dc = *request.dc_coinc_hz;
    rep.upconversion =
        analysis::upconversion_fraction(rep.fit, lo, dc, acc, request.lo_coinc_sigma_hz);
    rep.enhancement = analysis::enhancement_check(rep.fit, lo, dc, acc);
    rep.suppression = analysis::suppression_check(rep.fit, lo, dc, acc);
  }
  return rep;
}

namespace {

using KeyValues = std::vector<std::pair<std::string, nlohmann::ordered_json>>;

KeyValues report_fields(const FitReport& r) {
  KeyValues kv;
  auto est = [&kv](const std::string& key, const analysis::Estimate& e) {
    kv.emplace_back(key, e.value);
    kv.emplace_back(key + "_sigma", e.sigma);
  };
  kv.emplace_back("channel", analysis::channel_name(r.channel));
  kv.emplace_back("points", r.points);
  est("offset_hz", r.fit.offset_c);
  est("amplitude_hz", r.fit.amplitude_a);
  est("period_s", r.fit.period);
  est("phase0_rad", r.fit.phase0);
  kv.emplace_back("chi2", r.fit.chi2);
  kv.emplace_back("dof", r.fit.dof);
  kv.emplace_back("reduced_chi2", r.fit.reduced_chi2);
  kv.emplace_back("iterations", r.fit.iterations);
  kv.emplace_back("restarts", r.fit.restarts);
  kv.emplace_back("accidental_rate_hz", r.visibility.accidental_rate_used);
  est("visibility_raw", r.visibility.raw);
  est("visibility_corrected", r.visibility.corrected);
  if (r.bootstrap) {
    kv.emplace_back("bootstrap_visibility_raw_sigma", r.bootstrap->raw.sigma);
    kv.emplace_back("bootstrap_visibility_corrected_sigma", r.bootstrap->corrected.sigma);
  }
  if (r.upconversion) {
    const auto& u = *r.upconversion;
    est("upconversion_fraction", u.fraction);
    kv.emplace_back("upconversion_equivalent_form", u.equivalent_form);
    est("corrected_minimum_hz", u.corrected_minimum);
    kv.emplace_back("minimum_below_lo_significance", u.significance_below_lo);
    kv.emplace_back("upconversion_inconsistent", u.inconsistent);
  }
  if (r.enhancement) {
    est("enhancement_margin_hz", r.enhancement->margin);
    kv.emplace_back("enhancement_significance", r.enhancement->significance);
  }
  if (r.suppression) {
    est("suppression_margin_hz", r.suppression->margin);
    kv.emplace_back("suppression_significance", r.suppression->significance);
  }
  return kv;
}

std::string text_value(const nlohmann::ordered_json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string format_fit_report(const FitReport& report, OutputFormat format) {
  const auto kv = report_fields(report);
  if (format == OutputFormat::kJsonLines) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : kv) {
      // JSON has no inf/nan; an undefined phase becomes null.
      if (v.is_number_float() && !std::isfinite(v.get<double>()))
        j[k] = nullptr;
      else
        j[k] = v;
    }
    return j.dump() + "\n";
  }
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << text_value(v) << '\n';
  return out.str();
}

Figure parse_figure(const std::string& name) {
  if (name == "fig3") return Figure::kFig3;
  if (name == "fig4") return Figure::kFig4;
  if (name == "fig5") return Figure::kFig5;
  throw std::invalid_argument("unknown figure '" + name + "' (expected fig3, fig4 or fig5)");
}

std::string figure_name(Figure figure) {
  switch (figure) {
    case Figure::kFig3: return "fig3";
    case Figure::kFig4: return "fig4";
    case Figure::kFig5: return "fig5";
  }
  return "?";
}

bool ReproduceResult::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

fs::path default_scenario_dir() { return fs::path(TWOPATH_SCENARIO_DIR); }

std::string format_check(const CheckLine& line) {
  return std::string(line.passed ? "PASS" : "FAIL") + " " + line.name + ": " + line.detail;
}

namespace {

std::string fixed(double v, int digits = 4) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

CheckLine in_band(const std::string& name, double value, double lo, double hi) {
  return {name, value >= lo && value <= hi,
          fixed(value) + " in [" + fixed(lo, 3) + ", " + fixed(hi, 3) + "]"};
}

CheckLine at_least_sigma(const std::string& name, double significance, double need) {
  return {name, significance >= need,
          fixed(significance, 2) + " sigma (need >= " + fixed(need, 1) + ")"};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

void write_csv(const fs::path& path, const std::vector<detection::ScanRecord>& records) {
  std::ostringstream s;
  write_scan_csv(s, records);
  write_text(path, s.str());
}

Scenario load_figure(const fs::path& dir, Figure figure) {
  return calibrate(load_scenario(dir / (figure_name(figure) + ".yaml")));
}

FitRequest request_for(const Scenario& sc, Channel channel) {
  FitRequest req;
  req.channel = channel;
  req.options.period_guess_s = sc.pulses().fringe_period_s();
  req.coinc_window_s = sc.detection.coinc_window_ns * 1e-9;
  req.lo_coinc_hz = sc.reference.lo_coinc_hz;
  req.dc_coinc_hz = sc.reference.dc_coinc_hz;
  req.lo_coinc_sigma_hz = sc.reference.lo_coinc_sigma_hz;
  return req;
}

struct Bundle {
  ReproduceResult result;
  std::ostringstream report;

  void add(const CheckLine& c) {
    result.checks.push_back(c);
    report << format_check(c) << '\n';
  }
};

void reproduce_fig3(const Scenario& sc, std::uint64_t seed, const fs::path& out, Bundle& b) {
  const auto records = detection::simulate_scan(sc.scan.delays_s(), sc.model(), seed);
  write_csv(out / "fig3_scan.csv", records);
  b.result.files.push_back(out / "fig3_scan.csv");

  const FitReport rep = cmd_fit(records, request_for(sc, Channel::kCoincidence));
  b.report << "# fig3: balanced coincidence scan\n" << format_fit_report(rep, OutputFormat::kCsv);

  const double period_ref = sc.pulses().fringe_period_s();
  b.add(in_band("fig3.visibility_raw", rep.visibility.raw.value, 0.45, 0.51));
  b.add(in_band("fig3.visibility_corrected", rep.visibility.corrected.value, 0.54, 0.60));
  const double dev = std::abs(rep.fit.period.value / period_ref - 1.0);
  b.add({"fig3.period", dev <= 0.05,
         fixed(rep.fit.period.value * 1e15) + " fs vs " + fixed(period_ref * 1e15) +
             " fs (deviation " + fixed(100 * dev, 2) + "%, need <= 5%)"});
  if (rep.enhancement && rep.suppression) {
    b.add(at_least_sigma("fig3.enhancement", rep.enhancement->significance, 3.0));
    b.add(at_least_sigma("fig3.suppression", rep.suppression->significance, 3.0));
  }
}

void reproduce_fig4(const Scenario& sc, std::uint64_t seed, const fs::path& out, Bundle& b) {
  struct Angle {
    double deg;
    const char* tag;
  };
  const Angle angles[] = {{-45.0, "m45"}, {45.0, "p45"}, {0.0, "0"}, {90.0, "90"}};
  const auto delays = sc.scan.delays_s();

  b.report << "# fig4: singles fringes versus polarizer angle (fixed-period fits)\n";
  double vis_singles_a = 0.0, vis_singles_b = 0.0, vis_coinc = 0.0;
  for (std::size_t i = 0; i < std::size(angles); ++i) {
    const auto& a = angles[i];
    const auto records = detection::simulate_scan(delays, sc.model(a.deg), derive_seed(seed, i));
    const fs::path file = out / (std::string("fig4_pol_") + a.tag + ".csv");
    write_csv(file, records);
    b.result.files.push_back(file);

    FitRequest req = request_for(sc, Channel::kSinglesA);
    req.options.fix_period = true;
    const FitReport rep = cmd_fit(records, req);
    const double z = rep.fit.amplitude_a.value / rep.fit.amplitude_a.sigma;
    b.report << "polarizer_deg = " << format_double(a.deg) << '\n'
             << format_fit_report(rep, OutputFormat::kCsv);
    const std::string name = std::string("fig4.singles_a_amplitude_") + a.tag;
    if (a.deg == 45.0) {
      b.add({name, z > 5.0, fixed(z, 2) + " sigma (need > 5)"});
      vis_singles_a = rep.visibility.raw.value;
      req.channel = Channel::kSinglesB;
      vis_singles_b = cmd_fit(records, req).visibility.raw.value;
      req.channel = Channel::kCoincidence;
      vis_coinc = cmd_fit(records, req).visibility.raw.value;
    } else {
      b.add({name, z < 2.0, fixed(z, 2) + " sigma (need < 2)"});
    }
  }

  const double ratio_a = vis_coinc / vis_singles_a;
  b.add({"fig4.visibility_ratio_a", ratio_a >= 50.0 && ratio_a <= 200.0,
         "coincidence/singles_a = " + fixed(vis_coinc) + "/" + fixed(vis_singles_a) + " = " +
             fixed(ratio_a, 1) + " (need in [50, 200])"});
  b.report << "info fig4.visibility_ratio_b: coincidence/singles_b = " << fixed(vis_coinc) << "/"
           << fixed(vis_singles_b) << " = " << fixed(vis_coinc / vis_singles_b, 1) << '\n';

  const auto ext = detection::analytic_extremes(sc.model(45.0));
  const double amp_s = 0.5 * (ext.peak.singles_a - ext.trough.singles_a);
  const double amp_c = 0.5 * (ext.peak.coinc_true - ext.trough.coinc_true);
  const double rel = std::abs(amp_s * sc.detection.eta_b.value() - amp_c) / amp_c;
  std::ostringstream d;
  d << "relative error " << rel << " (need <= 1e-12)";
  b.add({"fig4.amplitude_identity", rel <= 1e-12, d.str()});
}

void reproduce_fig5(const Scenario& sc, std::uint64_t seed, const fs::path& out, Bundle& b) {
  const auto model = sc.model();
  const auto records = detection::simulate_scan(sc.scan.delays_s(), model, seed);
  write_csv(out / "fig5_scan.csv", records);
  b.result.files.push_back(out / "fig5_scan.csv");

  const FitReport rep = cmd_fit(records, request_for(sc, Channel::kCoincidence));
  b.report << "# fig5: imbalanced coincidence scan\n" << format_fit_report(rep, OutputFormat::kCsv);

  // What a noiseless fit would report; accidentals share the singles modulation.
  const auto ext = detection::analytic_extremes(model);
  const double amp = 0.5 * (ext.peak.coinc_total() - ext.trough.coinc_total());
  const double mean_true = 0.5 * (ext.peak.coinc_true + ext.trough.coinc_true);
  b.add(in_band("fig5.model_visibility_corrected", amp / mean_true, 0.18, 0.20));
  if (rep.upconversion) {
    b.add(in_band("fig5.upconversion_fraction", rep.upconversion->fraction.value, 0.14, 0.185));
    b.add(at_least_sigma("fig5.minimum_below_lo", rep.upconversion->significance_below_lo, 3.0));
  } else {
    b.add({"fig5.upconversion_fraction", false, "scenario lacks LO/DC reference rates"});
  }
}

}  // namespace

ReproduceResult cmd_reproduce(Figure figure, const fs::path& scenario_dir, const fs::path& out_dir,
                              std::optional<std::uint64_t> seed) {
  const Scenario sc = load_figure(scenario_dir, figure);
  const std::uint64_t s = seed.value_or(sc.scan.seed);
  fs::create_directories(out_dir);

  const std::string name = figure_name(figure);
  Bundle b;
  b.report << "# seed = " << s << '\n';
  save_scenario(sc, out_dir / (name + "_resolved.yaml"));
  b.result.files.push_back(out_dir / (name + "_resolved.yaml"));

  switch (figure) {
    case Figure::kFig3: reproduce_fig3(sc, s, out_dir, b); break;
    case Figure::kFig4: reproduce_fig4(sc, s, out_dir, b); break;
    case Figure::kFig5: reproduce_fig5(sc, s, out_dir, b); break;
  }
  const fs::path report = out_dir / (name + "_report.txt");
  write_text(report, b.report.str());
  b.result.files.push_back(report);
  return b.result;
}

}  // namespace twopath
