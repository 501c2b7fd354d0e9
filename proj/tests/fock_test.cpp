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

#include "twopath/fock.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "twopath/model.hpp"

namespace twopath {
namespace {

SourceParams make_source(ComplexValue ah, ComplexValue av, double eps, double pump_phase = 0.0) {
  SourceParams s;
  s.alpha_h = ah;
  s.alpha_v = av;
  s.epsilon = eps;
  s.pump_phase = pump_phase;
  return s;
}

double poisson(double mean, int n) {
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

// The fourth-order scale of terms the lowest-order model leaves out.
double fourth_order_scale(double ah, double av, double eps) {
  const double x = ah * av;
  return 2.0 * (eps * eps * eps * eps + x * x * (ah * ah + av * av) +
                eps * eps * (ah * ah + av * av) + 2 * eps * x * (ah * ah + av * av + eps * eps));
}

TEST(FockOracle, VacuumStaysVacuum) {
  const auto d = fock_oracle(SourceParams{}, 0.3);
  EXPECT_NEAR(d(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(d.both_occupied(), 0.0, 1e-15);
  EXPECT_NEAR(d.total(), 1.0, 1e-14);
}

TEST(FockOracle, PureDownConversionIsTwoModeSqueezedVacuum) {
  const double eps = 0.2;
  const auto d = fock_oracle(make_source(0.0, 0.0, eps), 0.0, 12);
  const double t = std::tanh(eps), c = std::cosh(eps);
  for (int n = 0; n <= 5; ++n) {
    EXPECT_NEAR(d(n, n), std::pow(t, 2 * n) / (c * c), 1e-13) << n;
    if (n < 5) {
      EXPECT_NEAR(d(n, n + 1), 0.0, 1e-15);
    }
  }
  EXPECT_NEAR(d.both_occupied(), t * t, 1e-12);
}

TEST(FockOracle, BalancedRunPairProbability) {
  const auto d = fock_oracle(make_source(0.0, 0.0, 0.037), 0.0);
  EXPECT_NEAR(d(1, 1), 1.37e-3, 5e-6);
  EXPECT_LT(d(1, 1), 0.037 * 0.037);
}

TEST(FockOracle, CoherentStatesArePoissonProducts) {
  const ComplexValue ah = std::polar(0.4, 0.3), av = std::polar(0.7, -1.2);
  const auto d = fock_oracle(make_source(ah, av, 0.0), 1.0, 12);
  for (int h = 0; h <= 4; ++h)
    for (int v = 0; v <= 4; ++v)
      EXPECT_NEAR(d(h, v), poisson(0.16, h) * poisson(0.49, v), 1e-13) << h << "," << v;
  EXPECT_NEAR(d.mean_h(), 0.16, 1e-12);
  EXPECT_NEAR(d.mean_v(), 0.49, 1e-12);
}

TEST(FockOracle, NormIsPreserved) {
  const auto d = fock_oracle(make_source(0.1, 0.2, 0.05), 0.8);
  EXPECT_NEAR(d.total(), 1.0, 1e-12);
  EXPECT_LT(d.truncation_loss(), kMaxTruncationLoss);
}

TEST(FockOracle, ReferencePointMatchesPerturbativeModel) {
  const auto s = make_source(0.1, 0.1, 0.01);
  for (int k = 0; k < 16; ++k) {
    const double phi = 2 * kPi * k / 16;
    EXPECT_NEAR(fock_oracle(s, phi).both_occupied(), pair_probability(s, phi, 1.0).p_pair, 1e-6)
        << "phi = " << phi;
  }
}

TEST(FockOracle, DeviationBoundedByFourthOrderTerms) {
  for (double a : {0.01, 0.03, 0.05, 0.08, 0.1})
    for (double eps : {0.001, 0.01, 0.03, 0.05})
      for (int k = 0; k < 8; ++k) {
        const double phi = 2 * kPi * k / 8;
        const auto s = make_source(a, a, eps);
        const double diff =
            std::abs(fock_oracle(s, phi).both_occupied() - pair_probability(s, phi, 1.0).p_pair);
        EXPECT_LE(diff, fourth_order_scale(a, a, eps) + 1e-12)
            << "a=" << a << " eps=" << eps << " phi=" << phi;
      }
}

TEST(FockOracle, PhaseConventionMatchesModel) {
  // Moving phase between pump and LO arguments leaves the distribution fixed.
  const auto a = fock_oracle(make_source(0.2, 0.2, 0.05, 0.7), 0.0);
  const auto b = fock_oracle(make_source(std::polar(0.2, -0.4), std::polar(0.2, -0.3), 0.05), 0.0);
  for (int h = 0; h <= 3; ++h)
    for (int v = 0; v <= 3; ++v) EXPECT_NEAR(a(h, v), b(h, v), 1e-14);
}

TEST(FockOracle, CutoffChecks) {
  EXPECT_THROW(fock_oracle(SourceParams{}, 0.0, 3), std::invalid_argument);
  try {
    fock_oracle(make_source(1.5, 1.5, 0.0), 0.0, 6);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.loss(), kMaxTruncationLoss);
  }
}

}  // namespace
}  // namespace twopath
