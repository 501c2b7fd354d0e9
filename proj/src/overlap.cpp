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

#include "twopath/overlap.hpp"

#include <cmath>
#include <stdexcept>

#include "twopath/model.hpp"

namespace twopath::overlap {

namespace {

const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::log(2.0));

double to_angular(double wavelength_m) { return 2.0 * kPi * kSpeedOfLight / wavelength_m; }

}  // namespace

void GaussianSpectrum::validate() const {
  if (!(center_m > 0.0) || !std::isfinite(center_m))
    throw std::invalid_argument("spectrum center must be positive");
  if (!(width_rad_s > 0.0) || !std::isfinite(width_rad_s))
    throw std::invalid_argument("spectrum width must be positive");
}

double GaussianSpectrum::center_rad_s() const { return to_angular(center_m); }

GaussianSpectrum GaussianSpectrum::from_fwhm(double center_m, double fwhm_m) {
  const double fwhm_rad_s = 2.0 * kPi * kSpeedOfLight * fwhm_m / (center_m * center_m);
  GaussianSpectrum s{center_m, fwhm_rad_s / kFwhmPerSigma};
  s.validate();
  return s;
}

double GaussianSpectrum::fwhm_m() const {
  return width_rad_s * kFwhmPerSigma * center_m * center_m / (2.0 * kPi * kSpeedOfLight);
}

GaussianSpectrum filtered_spectrum(const GaussianSpectrum& input, const GaussianSpectrum& filter) {
  input.validate();
  filter.validate();
  const double wi = 1.0 / (input.width_rad_s * input.width_rad_s);
  const double wf = 1.0 / (filter.width_rad_s * filter.width_rad_s);
  const double center = (input.center_rad_s() * wi + filter.center_rad_s() * wf) / (wi + wf);
  return GaussianSpectrum{to_angular(center), 1.0 / std::sqrt(wi + wf)};
}

double gaussian_mode_overlap(const GaussianSpectrum& a, const GaussianSpectrum& b) {
  a.validate();
  b.validate();
  const double sa = a.width_rad_s;
  const double sb = b.width_rad_s;
  const double sum2 = sa * sa + sb * sb;
  const double detuning = a.center_rad_s() - b.center_rad_s();
  return std::sqrt(2.0 * sa * sb / sum2) * std::exp(-detuning * detuning / (4.0 * sum2));
}

double coherence_time_s(double center_m, double fwhm_m) {
  if (!(fwhm_m > 0.0)) throw std::invalid_argument("filter FWHM must be positive");
  return center_m * center_m / (kSpeedOfLight * fwhm_m);
}

bool correlations_erased(const GaussianSpectrum& filter, double pump_fwhm_rad_s) {
  return filter.width_rad_s * kFwhmPerSigma < pump_fwhm_rad_s;
}

void OverlapModel::validate() const {
  if (!(gamma_spectral >= 0.0 && gamma_spectral <= 1.0))
    throw std::invalid_argument("gamma_spectral must lie in [0, 1]");
  if (!(gamma_spatial >= 0.0 && gamma_spatial <= 1.0))
    throw std::invalid_argument("gamma_spatial must lie in [0, 1]");
  if (envelope_sigma_s && !(*envelope_sigma_s > 0.0))
    throw std::invalid_argument("envelope sigma must be positive when enabled");
}

double fringe_envelope(double delay_s, const OverlapModel& model) {
  if (!model.envelope_sigma_s) return 1.0;
  const double sigma = *model.envelope_sigma_s;
  if (!(sigma > 0.0)) return 1.0;
  return std::exp(-delay_s * delay_s / (2.0 * sigma * sigma));
}

}  // namespace twopath::overlap
