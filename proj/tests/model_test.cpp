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

#include <gtest/gtest.h>

#include <cmath>

namespace twopath {
namespace {

SourceParams make_source(double ah, double av, double eps, double pump_phase = 0.0) {
  SourceParams s;
  s.alpha_h = ah;
  s.alpha_v = av;
  s.epsilon = eps;
  s.pump_phase = pump_phase;
  return s;
}

TEST(PhaseFromDelay, ZeroDelay) { EXPECT_EQ(phase_from_delay(0.0, PulseTrain{}), 0.0); }

TEST(PhaseFromDelay, OnePumpPeriodIsTwoPi) {
  const PulseTrain p;
  EXPECT_NEAR(p.fringe_period_s(), 1.351e-15, 1e-18);
  EXPECT_NEAR(phase_from_delay(405e-9 / kSpeedOfLight, p), 2 * kPi, 1e-12);
}

TEST(PhaseFromDelay, HalfPeriodIsPi) {
  EXPECT_NEAR(phase_from_delay(0.5 * 405e-9 / kSpeedOfLight, PulseTrain{}), kPi, 1e-12);
  EXPECT_NEAR(phase_from_delay(0.6755e-15, PulseTrain{}), kPi, 1e-3);
}

TEST(PulseTrain, RejectsWrongHarmonic) {
  PulseTrain p;
  p.pump_wavelength_m = 400e-9;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_NO_THROW(PulseTrain::from_lo_wavelength(80e6, 800e-9).validate());
  p = PulseTrain{};
  p.rep_rate_hz = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(PairProbability, DownConversionBlocked) {
  const auto s = make_source(0.1, 0.2, 0.0);
  for (double phi : {0.0, 1.0, 2.5}) {
    const auto p = pair_probability(s, phi, 1.0);
    EXPECT_DOUBLE_EQ(p.p_pair, 0.0004);
  }
}

TEST(PairProbability, OneLoBlocked) {
  const auto s = make_source(0.0, 0.2, 0.03);
  for (double phi : {0.0, 1.0, 2.5}) EXPECT_DOUBLE_EQ(pair_probability(s, phi, 1.0).p_pair, 9e-4);
}

TEST(PairProbability, BalancedDestructiveInterferenceVanishes) {
  const auto s = make_source(0.1, 0.1, 0.01);
  EXPECT_NEAR(pair_probability(s, kPi, 1.0).p_pair, 0.0, 1e-18);
  EXPECT_NEAR(pair_probability(s, 0.0, 1.0).p_pair, 4e-4, 1e-18);
}

TEST(PairProbability, PhaseConventionFoldsAllPhases) {
  SourceParams a = make_source(0.1, 0.2, 0.03, 0.4);
  SourceParams b = a;
  b.pump_phase = 0.0;
  b.alpha_h = std::polar(0.1, -0.3);
  b.alpha_v = std::polar(0.2, -0.1);
  for (double phi : {0.0, 0.7, 3.0})
    EXPECT_NEAR(pair_probability(a, phi, 0.8).p_pair, pair_probability(b, phi, 0.8).p_pair, 1e-15);
  EXPECT_NEAR(total_phase(b, 0.2), 0.6, 1e-15);
}

TEST(PairProbability, PeriodicAndExtremaAtZeroAndPi) {
  const auto s = make_source(0.12, 0.3, 0.04, 0.9);
  const double phi0 = -total_phase(s, 0.0);
  const double peak = pair_probability(s, phi0, 0.7).p_pair;
  const double trough = pair_probability(s, phi0 + kPi, 0.7).p_pair;
  for (int k = 0; k < 64; ++k) {
    const double phi = 2 * kPi * k / 64;
    const double p = pair_probability(s, phi, 0.7).p_pair;
    EXPECT_NEAR(p, pair_probability(s, phi + 2 * kPi, 0.7).p_pair, 1e-15);
    EXPECT_LE(p, peak + 1e-15);
    EXPECT_GE(p, trough - 1e-15);
  }
}

TEST(PairProbability, PeakExceedsSumOfIndependentPaths) {
  const auto s = make_source(0.12, 0.3, 0.04);
  const double x2 = std::pow(0.12 * 0.3, 2);
  const double phi0 = -total_phase(s, 0.0);
  EXPECT_GT(pair_probability(s, phi0, 0.5).p_pair, x2 + 0.04 * 0.04);
  EXPECT_DOUBLE_EQ(pair_probability(s, phi0, 0.0).p_pair, x2 + 0.04 * 0.04);
}

TEST(PairProbability, SinglesModulationEqualsPairModulation) {
  const auto s = make_source(0.15, 0.25, 0.03, 0.2);
  for (double a : {0.0, 1.1, 2.9})
    for (double b : {0.4, 4.0}) {
      const auto pa = pair_probability(s, a, 0.6);
      const auto pb = pair_probability(s, b, 0.6);
      EXPECT_NEAR(pa.n_h - pb.n_h, pa.p_pair - pb.p_pair, 1e-16);
      EXPECT_NEAR(pa.n_v - pb.n_v, pa.p_pair - pb.p_pair, 1e-16);
    }
}

TEST(PairProbability, GammaZeroIsPhaseIndependent) {
  const auto s = make_source(0.15, 0.25, 0.03);
  const double ref = pair_probability(s, 0.0, 0.0).p_pair;
  for (double phi : {0.5, 2.0, 4.0}) EXPECT_EQ(pair_probability(s, phi, 0.0).p_pair, ref);
}

TEST(PairProbability, RejectsAmplitudesOutsideBound) {
  EXPECT_THROW(pair_probability(make_source(0.6, 0.1, 0.01), 0.0, 1.0), PerturbativeBoundError);
  EXPECT_THROW(pair_probability(make_source(0.1, 0.1, 0.51), 0.0, 1.0), PerturbativeBoundError);
  EXPECT_NO_THROW(pair_probability(make_source(0.5, 0.5, 0.5), 0.0, 1.0));
  EXPECT_THROW(pair_probability(make_source(0.1, 0.1, 0.01), 0.0, 1.5), std::invalid_argument);
  EXPECT_THROW(pair_probability(make_source(0.1, 0.1, -0.01), 0.0, 1.0), std::invalid_argument);
}

TEST(IntrinsicVisibility, MatchesSampledFringe) {
  const auto s = make_source(0.2, 0.15, 0.02);
  const double phi0 = -total_phase(s, 0.0);
  const double hi = pair_probability(s, phi0, 0.8).p_pair;
  const double lo = pair_probability(s, phi0 + kPi, 0.8).p_pair;
  EXPECT_NEAR(intrinsic_visibility(s, 0.8), (hi - lo) / (hi + lo), 1e-14);
}

TEST(IntrinsicVisibility, MaximalAtBalanceEqualsGamma) {
  EXPECT_NEAR(intrinsic_visibility(make_source(0.1, 0.1, 0.01), 0.57), 0.57, 1e-15);
  EXPECT_LT(intrinsic_visibility(make_source(0.1, 0.2, 0.01), 0.57), 0.57);
  EXPECT_LT(intrinsic_visibility(make_source(0.1, 0.05, 0.01), 0.57), 0.57);
}

TEST(Klyshko, BalancedRunRates) {
  const auto k = klyshko_calibrate(770, 470, 3.3, PulseTrain{});
  EXPECT_NEAR(k.eta_a, 7.02e-3, 1e-5);
  EXPECT_NEAR(k.eta_b, 4.29e-3, 1e-5);
  EXPECT_NEAR(k.epsilon, 0.037, 5e-4);
  EXPECT_NEAR(k.pair_rate_hz, 770.0 * 470.0 / 3.3, 1e-9);
}

TEST(Klyshko, LosslessLimit) {
  const double f = 80e6, s = 1000.0;
  const auto k = klyshko_calibrate(s, s, s, PulseTrain{});
  EXPECT_DOUBLE_EQ(k.eta_a, 1.0);
  EXPECT_DOUBLE_EQ(k.eta_b, 1.0);
  EXPECT_NEAR(k.epsilon, std::sqrt(s / f), 1e-15);
}

TEST(Klyshko, ImpossibleRatesNameTheArm) {
  try {
    klyshko_calibrate(10, 3, 5, PulseTrain{});
    FAIL() << "expected InconsistentRatesError";
  } catch (const InconsistentRatesError& e) {
    EXPECT_NE(std::string(e.what()).find("singles rate B"), std::string::npos) << e.what();
  }
  EXPECT_THROW(klyshko_calibrate(0, 3, 1, PulseTrain{}), std::invalid_argument);
}

TEST(Klyshko, ForwardSimulationRoundTrip) {
  const PulseTrain p;
  const double sa = 770, sb = 470, cc = 3.3;
  const auto k = klyshko_calibrate(sa, sb, cc, p);
  const double pairs = k.epsilon * k.epsilon * p.rep_rate_hz;
  EXPECT_NEAR(k.eta_a * pairs, sa, 1e-10 * sa);
  EXPECT_NEAR(k.eta_b * pairs, sb, 1e-10 * sb);
  EXPECT_NEAR(k.eta_a * k.eta_b * pairs, cc, 1e-10 * cc);
}

TEST(CalibrateLo, BalancedRunLoRates) {
  const auto a = calibrate_lo(11800, 53800, 7.02e-3, 4.29e-3, PulseTrain{});
  EXPECT_NEAR(a.alpha_h_abs, 0.145, 1e-3);
  EXPECT_NEAR(a.alpha_v_abs, 0.396, 1e-3);
}

TEST(CalibrateLo, ZeroAndUnitAmplitude) {
  const PulseTrain p;
  const auto z = calibrate_lo(0, 0, 0.5, 0.5, p);
  EXPECT_EQ(z.alpha_h_abs, 0.0);
  EXPECT_EQ(z.alpha_v_abs, 0.0);
  const double eta = 0.01;
  EXPECT_NEAR(calibrate_lo(eta * p.rep_rate_hz, 0, eta, 1, p).alpha_h_abs, 1.0, 1e-15);
  EXPECT_THROW(calibrate_lo(1, 1, 0.0, 1, p), std::invalid_argument);
  EXPECT_THROW(calibrate_lo(-1, 1, 0.5, 1, p), std::invalid_argument);
}

}  // namespace
}  // namespace twopath
