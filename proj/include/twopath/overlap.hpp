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

#ifndef TWOPATH_OVERLAP_HPP
#define TWOPATH_OVERLAP_HPP

#include <optional>

namespace twopath::overlap {

/*
 * Gaussian spectral mode. width_rad_s is the rms width of the spectral
 * intensity |f(w)|^2 in angular frequency, so the field amplitude is
 * f(w) ~ exp(-(w - w0)^2 / (4 width^2)).
 */
struct GaussianSpectrum {
  double center_m = 810e-9;
  double width_rad_s = 1e13;

  void validate() const;
  double center_rad_s() const;

  /// Spectrum with the given intensity FWHM in wavelength.
  static GaussianSpectrum from_fwhm(double center_m, double fwhm_m);
  double fwhm_m() const;
};

/// Product of the input and filter amplitude profiles.
GaussianSpectrum filtered_spectrum(const GaussianSpectrum& input, const GaussianSpectrum& filter);

/// |<f_a|f_b>| for unit-normalized amplitudes.
double gaussian_mode_overlap(const GaussianSpectrum& a, const GaussianSpectrum& b);

/// Coherence time lambda^2 / (c * fwhm) of a band-limited field.
double coherence_time_s(double center_m, double fwhm_m);

/// Whether the filter is narrow enough to erase pump-induced frequency
/// correlations (filter FWHM below the pump FWHM, both in angular frequency).
bool correlations_erased(const GaussianSpectrum& filter, double pump_fwhm_rad_s);

struct OverlapModel {
  double gamma_spectral = 1.0;
  double gamma_spatial = 1.0;
  /// Gaussian delay envelope width; disabled when empty.
  std::optional<double> envelope_sigma_s;

  void validate() const;
  double gamma() const { return gamma_spectral * gamma_spatial; }
};

/// exp(-delay^2 / (2 sigma^2)), or 1 when the envelope is disabled.
double fringe_envelope(double delay_s, const OverlapModel& model);

}  // namespace twopath::overlap

#endif  // TWOPATH_OVERLAP_HPP
