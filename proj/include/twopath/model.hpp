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

#ifndef TWOPATH_MODEL_HPP
#define TWOPATH_MODEL_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace twopath {

using ComplexValue = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Largest |alpha| or epsilon accepted by the perturbative pair model.
inline constexpr double kPerturbativeBound = 0.5;

/// Thrown when amplitudes leave the weak-field regime; use fock_oracle instead.
class PerturbativeBoundError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a set of measured rates cannot come from any pair source.
class InconsistentRatesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/*
 * Per-pulse amplitudes of the two pair-production paths.
 *
 * The LO path creates |1_H,1_V> with amplitude alpha_h*alpha_v, the
 * down-conversion path with epsilon*exp(i*(pump_phase + phi)). All phase
 * enters through a single effective angle
 *
 *   phi_total = pump_phase + phi - arg(alpha_h) - arg(alpha_v)
 *
 * and both the perturbative model and the Fock oracle use it identically.
 */
struct SourceParams {
  ComplexValue alpha_h{0.0, 0.0};
  ComplexValue alpha_v{0.0, 0.0};
  double epsilon = 0.0;
  double pump_phase = 0.0;

  /// Throws std::invalid_argument on non-finite or negative inputs.
  void validate() const;
  double max_amplitude() const;
};

struct PulseTrain {
  double rep_rate_hz = 80e6;
  double pump_wavelength_m = 405e-9;
  double lo_wavelength_m = 810e-9;

  /// rep rate positive and pump at half the LO wavelength (1e-9 relative).
  void validate() const;
  /// Delay that advances the pump phase by one full cycle.
  double fringe_period_s() const { return pump_wavelength_m / kSpeedOfLight; }

  static PulseTrain from_lo_wavelength(double rep_rate_hz, double lo_wavelength_m);
};

struct PairProbabilities {
  double p_pair = 0.0;
  double n_h = 0.0;
  double n_v = 0.0;
};

/// Pump-phase advance produced by a delay of the pump arm.
double phase_from_delay(double delay_s, const PulseTrain& pulses);

/// Effective interference angle phi + pump_phase - arg(alpha_h alpha_v).
double total_phase(const SourceParams& src, double phi);

/*
 * Lowest-order two-path model:
 *   p_pair = |a_h a_v|^2 + eps^2 + 2 gamma eps |a_h a_v| cos(phi_total)
 * Each interfering pair carries one photon into each arm, so the singles
 * means n_h, n_v carry the same modulated term.
 *
 * Throws PerturbativeBoundError when any amplitude exceeds kPerturbativeBound.
 */
PairProbabilities pair_probability(const SourceParams& src, double phi, double gamma);

/// Fringe visibility of p_pair over phi: 2 gamma eps x / (eps^2 + x^2), x = |a_h a_v|.
double intrinsic_visibility(const SourceParams& src, double gamma);

struct KlyshkoResult {
  double eta_a = 0.0;
  double eta_b = 0.0;
  double pair_rate_hz = 0.0;
  double epsilon = 0.0;
};

/// Heralding-efficiency inversion of background-subtracted pair rates.
KlyshkoResult klyshko_calibrate(double singles_a_hz, double singles_b_hz, double coinc_hz,
                                const PulseTrain& pulses);

struct LoAmplitudes {
  double alpha_h_abs = 0.0;
  double alpha_v_abs = 0.0;
};

/// |alpha|^2 = singles / (eta * rep_rate) for each arm.
LoAmplitudes calibrate_lo(double singles_a_hz, double singles_b_hz, double eta_a, double eta_b,
                          const PulseTrain& pulses);

}  // namespace twopath

#endif  // TWOPATH_MODEL_HPP
