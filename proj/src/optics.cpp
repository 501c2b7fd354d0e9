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

#include <cmath>
#include <sstream>

namespace twopath::optics {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate(const Element& element) {
  std::visit(overloaded{
                 [](const Tap& t) {
                   if (!(t.transmission >= 0.0 && t.transmission <= 1.0))
                     throw std::invalid_argument("tap transmission must lie in [0, 1]");
                 },
                 [](const Attenuator& a) {
                   if (!(a.optical_density >= 0.0) || !std::isfinite(a.optical_density))
                     throw std::invalid_argument("optical density must be nonnegative");
                 },
                 [](const HalfWavePlate& w) {
                   if (!std::isfinite(w.axis_rad))
                     throw std::invalid_argument("half-wave plate axis must be finite");
                 },
                 [](const Polarizer& p) {
                   if (!std::isfinite(p.angle_rad))
                     throw std::invalid_argument("polarizer angle must be finite");
                 },
             },
             element);
}

JonesVector apply_element(const JonesVector& s, const Element& element) {
  return std::visit(
      overloaded{
          [&](const Tap& t) {
            const double k = std::sqrt(t.transmission);
            return JonesVector{s.h * k, s.v * k};
          },
          [&](const Attenuator& a) {
            const double k = std::pow(10.0, -a.optical_density / 2.0);
            return JonesVector{s.h * k, s.v * k};
          },
          [&](const HalfWavePlate& w) {
            // [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
            const double c = std::cos(2.0 * w.axis_rad);
            const double sn = std::sin(2.0 * w.axis_rad);
            return JonesVector{c * s.h + sn * s.v, sn * s.h - c * s.v};
          },
          [&](const Polarizer& p) {
            const double c = std::cos(p.angle_rad);
            const double sn = std::sin(p.angle_rad);
            const ComplexValue along = c * s.h + sn * s.v;
            return JonesVector{along * c, along * sn};
          },
      },
      element);
}

JonesVector propagate_chain(const JonesVector& input, const ElementChain& chain) {
  JonesVector state = input;
  for (const auto& element : chain) state = apply_element(state, element);
  return state;
}

std::string describe(const Element& element) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const Tap& t) { out << "tap(T=" << t.transmission << ")"; },
                 [&](const Attenuator& a) { out << "nd(OD=" << a.optical_density << ")"; },
                 [&](const HalfWavePlate& w) { out << "hwp(" << w.axis_rad * 180.0 / kPi << " deg)"; },
                 [&](const Polarizer& p) { out << "polarizer(" << p.angle_rad * 180.0 / kPi << " deg)"; },
             },
             element);
  return out.str();
}

}  // namespace twopath::optics
