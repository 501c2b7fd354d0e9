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

#include "twopath/optics.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

namespace twopath::optics {
namespace {

constexpr double kDeg = kPi / 180.0;

using Matrix = std::array<std::array<ComplexValue, 2>, 2>;

// Independent 2x2 matrix product oracle.
Matrix matrix_of(const Element& e) {
  if (const auto* t = std::get_if<Tap>(&e)) {
    const double a = std::sqrt(t->transmission);
    return {{{a, 0.0}, {0.0, a}}};
  }
  if (const auto* n = std::get_if<Attenuator>(&e)) {
    const double a = std::pow(10.0, -n->optical_density / 2);
    return {{{a, 0.0}, {0.0, a}}};
  }
  if (const auto* w = std::get_if<HalfWavePlate>(&e)) {
    const double c = std::cos(2 * w->axis_rad), s = std::sin(2 * w->axis_rad);
    return {{{c, s}, {s, -c}}};
  }
  const double th = std::get<Polarizer>(e).angle_rad;
  const double c = std::cos(th), s = std::sin(th);
  return {{{c * c, c * s}, {c * s, s * s}}};
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) m[i][j] += a[i][k] * b[k][j];
  return m;
}

void expect_near(const JonesVector& a, const JonesVector& b, double tol = 1e-14) {
  EXPECT_NEAR(std::abs(a.h - b.h), 0.0, tol);
  EXPECT_NEAR(std::abs(a.v - b.v), 0.0, tol);
}

const JonesVector kDiagonal{0.3 / std::sqrt(2.0), 0.3 / std::sqrt(2.0)};

TEST(Polarizer, PlusFortyFivePassesBoth) {
  expect_near(apply_element(kDiagonal, Polarizer{45 * kDeg}), kDiagonal);
}

TEST(Polarizer, MinusFortyFiveBlocksBoth) {
  expect_near(apply_element(kDiagonal, Polarizer{-45 * kDeg}), JonesVector{});
}

TEST(Polarizer, ZeroPassesHOnly) {
  const auto out = apply_element(kDiagonal, Polarizer{0.0});
  expect_near(out, JonesVector{0.3 / std::sqrt(2.0), 0.0});
  const auto out90 = apply_element(kDiagonal, Polarizer{90 * kDeg});
  expect_near(out90, JonesVector{0.0, 0.3 / std::sqrt(2.0)});
}

TEST(Chain, EmptyIsIdentity) {
  const JonesVector in{{0.2, 0.1}, {-0.3, 0.4}};
  expect_near(propagate_chain(in, {}), in, 0.0);
}

TEST(Chain, TwoTenPercentTaps) {
  expect_near(propagate_chain({1.0, 0.0}, {Tap{0.1}, Tap{0.1}}), JonesVector{0.1, 0.0});
}

TEST(HalfWavePlate, RotatesVToFortyFive) {
  const auto out = apply_element({0.0, 1.0}, HalfWavePlate{22.5 * kDeg});
  EXPECT_NEAR(std::abs(out.h), std::abs(out.v), 1e-15);
  EXPECT_NEAR(out.power(), 1.0, 1e-15);
  const auto diag = apply_element({0.0, 1.0}, HalfWavePlate{67.5 * kDeg});
  EXPECT_NEAR(std::abs(apply_element(diag, Polarizer{-45 * kDeg}).power()), 0.0, 1e-30);
}

TEST(Attenuator, OpticalDensityScalesPower) {
  const auto out = apply_element({1.0, 0.5}, Attenuator{2.0});
  EXPECT_NEAR(out.power(), 1.25e-2, 1e-16);
}

TEST(Chain, AgreesWithMatrixProduct) {
  const ElementChain chain{Tap{0.1}, Attenuator{0.7}, HalfWavePlate{67.5 * kDeg},
                           Polarizer{30 * kDeg}, HalfWavePlate{-10 * kDeg}, Tap{0.35}};
  Matrix m{{{1.0, 0.0}, {0.0, 1.0}}};
  for (const auto& e : chain) m = multiply(matrix_of(e), m);
  const JonesVector in{{0.3, -0.2}, {0.5, 0.1}};
  const auto out = propagate_chain(in, chain);
  expect_near(out, JonesVector{m[0][0] * in.h + m[0][1] * in.v, m[1][0] * in.h + m[1][1] * in.v});
}

TEST(Properties, ElementsAreNormNonincreasing) {
  const JonesVector in{{0.3, -0.2}, {0.5, 0.1}};
  for (const Element& e : ElementChain{Tap{0.4}, Attenuator{0.3}, HalfWavePlate{0.3},
                                       Polarizer{1.1}, Polarizer{-0.4}})
    EXPECT_LE(apply_element(in, e).power(), in.power() + 1e-15) << describe(e);
}

TEST(Properties, PolarizerIsIdempotentAndCrossedPairAnnihilates) {
  const JonesVector in{{0.3, -0.2}, {0.5, 0.1}};
  for (double deg : {0.0, 17.0, 45.0, 90.0, 123.0}) {
    const Polarizer p{deg * kDeg};
    const auto once = apply_element(in, p);
    expect_near(apply_element(once, p), once);
    expect_near(apply_element(once, Polarizer{(deg + 90) * kDeg}), JonesVector{});
  }
}

TEST(Properties, TapsCompose) {
  const JonesVector in{{0.3, -0.2}, {0.5, 0.1}};
  expect_near(propagate_chain(in, {Tap{0.3}, Tap{0.6}}), apply_element(in, Tap{0.18}));
}

TEST(Validate, RejectsBadElements) {
  EXPECT_THROW(validate(Tap{1.2}), std::invalid_argument);
  EXPECT_THROW(validate(Tap{-0.1}), std::invalid_argument);
  EXPECT_THROW(validate(Attenuator{-1.0}), std::invalid_argument);
  EXPECT_THROW(validate(Polarizer{std::nan("")}), std::invalid_argument);
  EXPECT_NO_THROW(validate(HalfWavePlate{3.0}));
}

}  // namespace
}  // namespace twopath::optics
