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

#include "twopath/detection.hpp"

#include <cmath>
#include <stdexcept>

#include "twopath/random.hpp"

namespace twopath::detection {

void DetectionParams::validate() const {
  auto nonneg = [](double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument(std::string(name) + " must be finite and nonnegative");
  };
  if (!(eta_a > 0.0 && eta_a <= 1.0)) throw std::invalid_argument("eta_a must lie in (0, 1]");
  if (!(eta_b > 0.0 && eta_b <= 1.0)) throw std::invalid_argument("eta_b must lie in (0, 1]");
  nonneg(dark_a_hz, "dark_a");
  nonneg(dark_b_hz, "dark_b");
  nonneg(background_a_hz, "background_a");
  nonneg(background_b_hz, "background_b");
  nonneg(coinc_window_s, "coinc_window");
  nonneg(integration_time_s, "integration_time");
  if (!(rep_rate_hz > 0.0)) throw std::invalid_argument("rep_rate must be positive");
  if (!(coinc_window_s * rep_rate_hz < 1.0))
    throw std::invalid_argument("coincidence window must be shorter than the pulse period");
  if (!(lo_mode_match > 0.0 && lo_mode_match <= 1.0))
    throw std::invalid_argument("lo_mode_match must lie in (0, 1]");
}

void ScanModel::validate() const {
  source.validate();
  pulses.validate();
  overlap.validate();
  detection.validate();
  if (std::abs(pulses.rep_rate_hz - detection.rep_rate_hz) > 1e-9 * pulses.rep_rate_hz)
    throw std::invalid_argument("pulse train and detection rep rates differ");
}

double accidental_rate(double singles_a_hz, double singles_b_hz, double window_s) {
  return singles_a_hz * singles_b_hz * window_s;
}

RateSet rates_at(const SourceParams& src, double phi, double gamma, const DetectionParams& det) {
  const PairProbabilities p = pair_probability(src, phi, gamma);
  const double f = det.rep_rate_hz;
  const double unmatched = 1.0 / det.lo_mode_match - 1.0;

  RateSet r;
  r.singles_a = det.background_a_hz + det.dark_a_hz + det.eta_a * f * p.n_h +
                det.eta_a * f * std::norm(src.alpha_h) * unmatched;
  r.singles_b = det.background_b_hz + det.dark_b_hz + det.eta_b * f * p.n_v +
                det.eta_b * f * std::norm(src.alpha_v) * unmatched;
  r.coinc_true = det.eta_a * det.eta_b * f * p.p_pair;
  r.coinc_accidental = accidental_rate(r.singles_a, r.singles_b, det.coinc_window_s);
  return r;
}

RateSet rates_at_delay(const ScanModel& model, double delay_s) {
  const double phi = phase_from_delay(delay_s, model.pulses);
  const double gamma = model.overlap.gamma() * overlap::fringe_envelope(delay_s, model.overlap);
  return rates_at(model.source, phi, gamma, model.detection);
}

FringeExtremes analytic_extremes(const ScanModel& model, double delay_s) {
  const double gamma = model.overlap.gamma() * overlap::fringe_envelope(delay_s, model.overlap);
  // phi such that total_phase() is 0, then pi.
  const double phi_peak = -total_phase(model.source, 0.0);
  return {rates_at(model.source, phi_peak, gamma, model.detection),
          rates_at(model.source, phi_peak + kPi, gamma, model.detection)};
}

ScanRecord simulate_point(const ScanModel& model, double delay_s, std::uint64_t index,
                          std::uint64_t master_seed) {
  const RateSet r = rates_at_delay(model, delay_s);
  const double t = model.detection.integration_time_s;
  ScanRecord rec;
  rec.delay_s = delay_s;
  rec.integration_time_s = t;
  rec.rng_seed = derive_seed(master_seed, index);
  CountStream stream(rec.rng_seed);
  rec.counts_a = stream.poisson(r.singles_a * t);
  rec.counts_b = stream.poisson(r.singles_b * t);
  rec.counts_cc = stream.poisson(r.coinc_total() * t);
  return rec;
}

std::vector<ScanRecord> simulate_scan(std::span<const double> delays, const ScanModel& model,
                                      std::uint64_t master_seed) {
  model.validate();
  std::vector<ScanRecord> out;
  out.reserve(delays.size());
  for (std::size_t i = 0; i < delays.size(); ++i)
    out.push_back(simulate_point(model, delays[i], i, master_seed));
  return out;
}

std::vector<double> linear_delays(double start_s, double stop_s, int n) {
  if (n < 0) throw std::invalid_argument("point count must be nonnegative");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = start_s;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = start_s + (stop_s - start_s) * i / (n - 1);
  return out;
}

}  // namespace twopath::detection
