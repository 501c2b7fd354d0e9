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

#ifndef TWOPATH_ANALYSIS_HPP
#define TWOPATH_ANALYSIS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twopath/detection.hpp"

namespace twopath::analysis {

struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

enum class Channel { kSinglesA, kSinglesB, kCoincidence };

Channel parse_channel(const std::string& name);
std::string channel_name(Channel channel);

/// One rate measurement with its standard deviation.
struct FringeSample {
  double delay_s = 0.0;
  double rate_hz = 0.0;
  double sigma_hz = 1.0;
};

/// Rates = counts / t with Poisson sigma sqrt(max(counts, 1)) / t.
std::vector<FringeSample> to_samples(std::span<const detection::ScanRecord> records,
                                     Channel channel);

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitOptions {
  double period_guess_s = 0.0;
  /// Hold the period at period_guess_s (linear fit in C, A, phase0 only).
  bool fix_period = false;
  /// Half-width of the period search window relative to the guess.
  double period_window = 0.3;
  int grid_points = 61;
  int max_restarts = 6;
  int max_iterations = 200;
};

// Parameter order of FringeFit::covariance.
enum FitParam { kOffset = 0, kAmplitude = 1, kPeriod = 2, kPhase = 3 };

/*
 * rate(t) = C + A cos(2 pi t / period + phase0), A >= 0.
 * Standard errors come from the inverse curvature of chi^2 / 2 and are not
 * rescaled by the reduced chi^2. A fixed-period fit reports period sigma 0.
 */
struct FringeFit {
  Estimate offset_c;
  Estimate amplitude_a;
  Estimate period;
  Estimate phase0;
  double chi2 = 0.0;
  int dof = 0;
  double reduced_chi2 = 0.0;
  int iterations = 0;
  int restarts = 0;
  std::array<std::array<double, 4>, 4> covariance{};

  double cov(FitParam i, FitParam j) const { return covariance[i][j]; }
  double evaluate(double delay_s) const;
};

FringeFit fit_samples(std::span<const FringeSample> samples, const FitOptions& options);

/// Weighted nonlinear least-squares fringe fit of one channel of a scan.
FringeFit fit_fringe(std::span<const detection::ScanRecord> records, Channel channel,
                     const FitOptions& options);

struct VisibilityReport {
  Estimate raw;
  Estimate corrected;
  double accidental_rate_used = 0.0;
};

/// raw = A / C, corrected = A / (C - accidentals), first-order errors.
VisibilityReport visibility(const FringeFit& fit, double accidental_rate_hz);

/// Accidental rate implied by a scan's singles columns, mean(S_A * S_B) * window.
double accidentals_from_records(std::span<const detection::ScanRecord> records, double window_s);

struct UpconversionReport {
  Estimate fraction;
  /// (A - dc_coinc) / lo_coinc; equals the fraction when C - acc = lo + dc.
  double equivalent_form = 0.0;
  /// (C - accidentals) - A.
  Estimate corrected_minimum;
  /// (lo_coinc - corrected_minimum) in units of its combined standard error.
  double significance_below_lo = 0.0;
  /// Fitted minimum above lo + dc: the fit exceeds the physical bound.
  bool inconsistent = false;
};

/*
 * Lower bound on the fraction of LO pairs removed at the fringe minimum,
 * max(0, lo - R_min) / lo. Visibility loss only shrinks A, so this can
 * only underestimate the removed fraction.
 */
UpconversionReport upconversion_fraction(const FringeFit& fit, double lo_coinc_hz,
                                         double dc_coinc_hz, double accidental_rate_hz,
                                         double lo_coinc_stderr_hz = 0.0);

struct ExtremumCheck {
  bool passed = false;
  /// Positive when the check passes.
  Estimate margin;
  double significance = 0.0;
};

/// Corrected fringe peak above the sum of the independent-path rates.
ExtremumCheck enhancement_check(const FringeFit& fit, double lo_coinc_hz, double dc_coinc_hz,
                                double accidental_rate_hz);

/// Corrected fringe trough below the sum of the independent-path rates.
ExtremumCheck suppression_check(const FringeFit& fit, double lo_coinc_hz, double dc_coinc_hz,
                                double accidental_rate_hz);

/// Nonparametric bootstrap of the raw and corrected visibility standard errors.
VisibilityReport bootstrap_visibility(std::span<const FringeSample> samples,
                                      const FitOptions& options, double accidental_rate_hz,
                                      int resamples, std::uint64_t seed);

}  // namespace twopath::analysis

#endif  // TWOPATH_ANALYSIS_HPP
