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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "twopath/model.hpp"

namespace twopath::overlap {
namespace {

// Field amplitude profile relative to an offset origin w_ref.
double amplitude(const GaussianSpectrum& s, double x, double w_ref) {
  const double d = x + w_ref - s.center_rad_s();
  return std::exp(-d * d / (4.0 * s.width_rad_s * s.width_rad_s));
}

// Trapezoid rule; spectrally accurate for Gaussians on a wide enough window.
double integrate(const std::function<double(double)>& f, double lo, double hi, int n = 20000) {
  const double h = (hi - lo) / n;
  double sum = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) sum += f(lo + i * h);
  return sum * h;
}

double numeric_overlap(const GaussianSpectrum& a, const GaussianSpectrum& b) {
  const double w_ref = a.center_rad_s();
  const double span = 14.0 * std::max(a.width_rad_s, b.width_rad_s) +
                      std::abs(a.center_rad_s() - b.center_rad_s());
  auto fa = [&](double x) { return amplitude(a, x, w_ref); };
  auto fb = [&](double x) { return amplitude(b, x, w_ref); };
  const double ab = integrate([&](double x) { return fa(x) * fb(x); }, -span, span);
  const double aa = integrate([&](double x) { return fa(x) * fa(x); }, -span, span);
  const double bb = integrate([&](double x) { return fb(x) * fb(x); }, -span, span);
  return ab / std::sqrt(aa * bb);
}

TEST(GaussianSpectrum, FwhmRoundTrip) {
  const auto s = GaussianSpectrum::from_fwhm(810e-9, 10e-9);
  EXPECT_NEAR(s.fwhm_m(), 10e-9, 1e-22);
  EXPECT_THROW(GaussianSpectrum::from_fwhm(810e-9, 0.0), std::invalid_argument);
}

TEST(FilteredSpectrum, WideFilterIsTransparent) {
  const auto in = GaussianSpectrum::from_fwhm(810e-9, 3e-9);
  const auto out = filtered_spectrum(in, GaussianSpectrum::from_fwhm(810e-9, 3e-6));
  EXPECT_NEAR(out.width_rad_s / in.width_rad_s, 1.0, 1e-5);
  EXPECT_NEAR(out.center_m, in.center_m, 1e-18);
}

TEST(FilteredSpectrum, EqualWidthsShrinkByRootTwo) {
  const GaussianSpectrum s{810e-9, 2e13};
  EXPECT_NEAR(filtered_spectrum(s, s).width_rad_s / (2e13 / std::sqrt(2.0)), 1.0, 1e-14);
}

TEST(FilteredSpectrum, MatchesQuadratureOfProductProfile) {
  const auto in = GaussianSpectrum::from_fwhm(810e-9, 30e-9);
  const auto filter = GaussianSpectrum::from_fwhm(812e-9, 10e-9);
  const auto out = filtered_spectrum(in, filter);

  const double w_ref = filter.center_rad_s();
  const double span = 14.0 * in.width_rad_s;
  auto intensity = [&](double x) {
    const double a = amplitude(in, x, w_ref) * amplitude(filter, x, w_ref);
    return a * a;
  };
  const double norm = integrate(intensity, -span, span);
  const double mean = integrate([&](double x) { return x * intensity(x); }, -span, span) / norm;
  const double var =
      integrate([&](double x) { return (x - mean) * (x - mean) * intensity(x); }, -span, span) /
      norm;
  EXPECT_NEAR(std::sqrt(var) / out.width_rad_s, 1.0, 1e-9);
  EXPECT_NEAR((mean + w_ref) / out.center_rad_s(), 1.0, 1e-12);
  EXPECT_NEAR(mean, out.center_rad_s() - w_ref, 1e-9 * out.width_rad_s);
}

TEST(FilteredSpectrum, NeverWidens) {
  for (double a : {1.0, 5.0, 30.0})
    for (double b : {0.5, 10.0, 100.0}) {
      const auto in = GaussianSpectrum::from_fwhm(810e-9, a * 1e-9);
      const auto out = filtered_spectrum(in, GaussianSpectrum::from_fwhm(805e-9, b * 1e-9));
      EXPECT_LE(out.width_rad_s, in.width_rad_s);
    }
}

TEST(ModeOverlap, IdenticalSpectraGiveOne) {
  const GaussianSpectrum s{810e-9, 3e13};
  EXPECT_NEAR(gaussian_mode_overlap(s, s), 1.0, 1e-15);
}

TEST(ModeOverlap, EqualWidthDetuningReducesToExponential) {
  const GaussianSpectrum a{810e-9, 1e13};
  GaussianSpectrum b{0.0, 1e13};
  b.center_m = 2 * kPi * kSpeedOfLight / (a.center_rad_s() + 1.5e13);
  const double delta = b.center_rad_s() - a.center_rad_s();
  EXPECT_NEAR(gaussian_mode_overlap(a, b), std::exp(-delta * delta / (8e26)), 1e-12);
}

TEST(ModeOverlap, WidthRatioTwoMatchesQuadrature) {
  const GaussianSpectrum a{810e-9, 2e13}, b{810e-9, 1e13};
  EXPECT_NEAR(gaussian_mode_overlap(a, b), std::sqrt(0.8), 1e-15);
  EXPECT_NEAR(numeric_overlap(a, b), std::sqrt(0.8), 1e-9);
}

TEST(ModeOverlap, DetunedUnequalMatchesQuadrature) {
  const GaussianSpectrum a{810e-9, 2e13}, b{811e-9, 0.7e13};
  EXPECT_NEAR(gaussian_mode_overlap(a, b) / numeric_overlap(a, b), 1.0, 1e-9);
}

TEST(ModeOverlap, SymmetricAndAtMostOne) {
  const GaussianSpectrum a{810e-9, 2e13}, b{809e-9, 1.3e13};
  EXPECT_DOUBLE_EQ(gaussian_mode_overlap(a, b), gaussian_mode_overlap(b, a));
  EXPECT_LT(gaussian_mode_overlap(a, b), 1.0);
}

TEST(CoherenceTime, TenNanometerFilter) {
  EXPECT_NEAR(coherence_time_s(810e-9, 10e-9), 218.86e-15, 0.1e-15);
  EXPECT_THROW(coherence_time_s(810e-9, 0.0), std::invalid_argument);
}

TEST(CorrelationErasure, NarrowFilterOnly) {
  const double pump_fwhm = GaussianSpectrum::from_fwhm(810e-9, 3.3e-9).width_rad_s * 2.3548200450309493;
  EXPECT_TRUE(correlations_erased(GaussianSpectrum::from_fwhm(810e-9, 1e-9), pump_fwhm));
  EXPECT_FALSE(correlations_erased(GaussianSpectrum::from_fwhm(810e-9, 10e-9), pump_fwhm));
}

TEST(FringeEnvelope, Values) {
  OverlapModel m;
  EXPECT_EQ(fringe_envelope(5e-15, m), 1.0);
  m.envelope_sigma_s = 100e-15;
  EXPECT_EQ(fringe_envelope(0.0, m), 1.0);
  EXPECT_NEAR(fringe_envelope(100e-15, m), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(fringe_envelope(-100e-15, m), 0.6065306597, 1e-10);
}

TEST(OverlapModel, GammaIsProductAndValidated) {
  OverlapModel m{0.8, 0.5, std::nullopt};
  EXPECT_DOUBLE_EQ(m.gamma(), 0.4);
  m.gamma_spatial = 1.1;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = OverlapModel{1.0, 1.0, -1.0};
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace twopath::overlap
