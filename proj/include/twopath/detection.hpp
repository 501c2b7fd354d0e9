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

#ifndef TWOPATH_DETECTION_HPP
#define TWOPATH_DETECTION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "twopath/model.hpp"
#include "twopath/overlap.hpp"

namespace twopath::detection {

struct DetectionParams {
  double eta_a = 1.0;
  double eta_b = 1.0;
  double dark_a_hz = 0.0;
  double dark_b_hz = 0.0;
  double background_a_hz = 0.0;
  double background_b_hz = 0.0;
  double coinc_window_s = 1.07e-9;
  double rep_rate_hz = 80e6;
  double integration_time_s = 1.0;
  // Fraction of detected LO singles in the interfering mode. The rest is
  // incoherent LO light that only adds singles (and hence accidentals).
  double lo_mode_match = 1.0;

  void validate() const;
};

struct RateSet {
  double singles_a = 0.0;
  double singles_b = 0.0;
  double coinc_true = 0.0;
  double coinc_accidental = 0.0;

  double coinc_total() const { return coinc_true + coinc_accidental; }
};

/// Physics needed to turn a delay into detector rates.
struct ScanModel {
  SourceParams source;
  PulseTrain pulses;
  overlap::OverlapModel overlap;
  DetectionParams detection;

  void validate() const;
};

struct ScanRecord {
  double delay_s = 0.0;
  std::uint64_t counts_a = 0;
  std::uint64_t counts_b = 0;
  std::uint64_t counts_cc = 0;
  double integration_time_s = 0.0;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

/// Flat-rate accidental model S_A * S_B * window.
double accidental_rate(double singles_a_hz, double singles_b_hz, double window_s);

/// Rates at interference phase phi with an already envelope-scaled gamma.
RateSet rates_at(const SourceParams& src, double phi, double gamma, const DetectionParams& det);

/// Rates at a pump-arm delay; applies phase_from_delay and the fringe envelope.
RateSet rates_at_delay(const ScanModel& model, double delay_s);

struct FringeExtremes {
  RateSet peak;
  RateSet trough;
};

/// Noiseless rates at the constructive and destructive phases for a delay's
/// envelope-scaled gamma.
FringeExtremes analytic_extremes(const ScanModel& model, double delay_s = 0.0);

/// One record; the stream seed is derive_seed(master_seed, index).
ScanRecord simulate_point(const ScanModel& model, double delay_s, std::uint64_t index,
                          std::uint64_t master_seed);

/*
 * Poisson counts for every delay. Record i depends only on (model, delays[i],
 * i, master_seed), never on evaluation order.
 */
std::vector<ScanRecord> simulate_scan(std::span<const double> delays, const ScanModel& model,
                                      std::uint64_t master_seed);

/// n evenly spaced delays from start to stop inclusive.
std::vector<double> linear_delays(double start_s, double stop_s, int n);

}  // namespace twopath::detection

#endif  // TWOPATH_DETECTION_HPP
