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

#include "twopath/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twopath {

namespace {

bool finite(ComplexValue z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void SourceParams::validate() const {
  if (!finite(alpha_h) || !finite(alpha_v) || !std::isfinite(epsilon) ||
      !std::isfinite(pump_phase)) {
    throw std::invalid_argument("source parameters must be finite");
  }
  if (epsilon < 0.0) {
    throw std::invalid_argument("epsilon must be nonnegative");
  }
}

double SourceParams::max_amplitude() const {
  return std::max({std::abs(alpha_h), std::abs(alpha_v), epsilon});
}

void PulseTrain::validate() const {
  if (!(rep_rate_hz > 0.0) || !std::isfinite(rep_rate_hz)) {
    throw std::invalid_argument("rep_rate must be positive");
  }
  if (!(pump_wavelength_m > 0.0) || !(lo_wavelength_m > 0.0)) {
    throw std::invalid_argument("wavelengths must be positive");
  }
  if (std::abs(2.0 * pump_wavelength_m - lo_wavelength_m) > 1e-9 * lo_wavelength_m) {
    throw std::invalid_argument("pump wavelength must be half the LO wavelength");
  }
}

PulseTrain PulseTrain::from_lo_wavelength(double rep_rate_hz, double lo_wavelength_m) {
  return PulseTrain{rep_rate_hz, lo_wavelength_m / 2.0, lo_wavelength_m};
}

double phase_from_delay(double delay_s, const PulseTrain& pulses) {
  return 2.0 * kPi * kSpeedOfLight * delay_s / pulses.pump_wavelength_m;
}

double total_phase(const SourceParams& src, double phi) {
  return phi + src.pump_phase - std::arg(src.alpha_h) - std::arg(src.alpha_v);
}

PairProbabilities pair_probability(const SourceParams& src, double phi, double gamma) {
  src.validate();
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }
  if (src.max_amplitude() > kPerturbativeBound) {
    std::ostringstream msg;
    msg << "amplitude " << src.max_amplitude() << " exceeds perturbative bound "
        << kPerturbativeBound << "; use fock_oracle";
    throw PerturbativeBoundError(msg.str());
  }

  const double lo_pair = std::abs(src.alpha_h) * std::abs(src.alpha_v);
  const double lo_term = lo_pair * lo_pair;
  const double dc_term = src.epsilon * src.epsilon;
  const double cross = 2.0 * gamma * src.epsilon * lo_pair * std::cos(total_phase(src, phi));

  PairProbabilities out;
  out.p_pair = std::max(0.0, lo_term + dc_term + cross);
  const double pair_excess = out.p_pair - lo_term;
  out.n_h = std::norm(src.alpha_h) + pair_excess;
  out.n_v = std::norm(src.alpha_v) + pair_excess;
  return out;
}

double intrinsic_visibility(const SourceParams& src, double gamma) {
  const double x = std::abs(src.alpha_h) * std::abs(src.alpha_v);
  const double denom = src.epsilon * src.epsilon + x * x;
  if (denom == 0.0) return 0.0;
  return 2.0 * gamma * src.epsilon * x / denom;
}

KlyshkoResult klyshko_calibrate(double singles_a_hz, double singles_b_hz, double coinc_hz,
                                const PulseTrain& pulses) {
  pulses.validate();
  if (!(singles_a_hz > 0.0) || !(singles_b_hz > 0.0) || !(coinc_hz > 0.0)) {
    throw std::invalid_argument("klyshko_calibrate: all rates must be positive");
  }
  if (coinc_hz > singles_a_hz || coinc_hz > singles_b_hz) {
    std::ostringstream msg;
    msg << "coincidence rate " << coinc_hz << " Hz exceeds singles rate "
        << (coinc_hz > singles_a_hz ? "A (" : "B (")
        << (coinc_hz > singles_a_hz ? singles_a_hz : singles_b_hz) << " Hz)";
    throw InconsistentRatesError(msg.str());
  }
  KlyshkoResult out;
  out.eta_a = coinc_hz / singles_b_hz;
  out.eta_b = coinc_hz / singles_a_hz;
  out.pair_rate_hz = singles_a_hz * singles_b_hz / coinc_hz;
  out.epsilon = std::sqrt(out.pair_rate_hz / pulses.rep_rate_hz);
  return out;
}

LoAmplitudes calibrate_lo(double singles_a_hz, double singles_b_hz, double eta_a, double eta_b,
                          const PulseTrain& pulses) {
  pulses.validate();
  if (!(eta_a > 0.0 && eta_a <= 1.0) || !(eta_b > 0.0 && eta_b <= 1.0)) {
    throw std::invalid_argument("calibrate_lo: efficiencies must lie in (0, 1]");
  }
  if (singles_a_hz < 0.0 || singles_b_hz < 0.0) {
    throw std::invalid_argument("calibrate_lo: singles rates must be nonnegative");
  }
  return {std::sqrt(singles_a_hz / (eta_a * pulses.rep_rate_hz)),
          std::sqrt(singles_b_hz / (eta_b * pulses.rep_rate_hz))};
}

}  // namespace twopath
