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

#ifndef TWOPATH_OPTICS_HPP
#define TWOPATH_OPTICS_HPP

#include <string>
#include <variant>
#include <vector>

#include "twopath/model.hpp"

namespace twopath::optics {

/// Per-pulse field amplitudes in the H/V basis. Not normalized.
struct JonesVector {
  ComplexValue h{0.0, 0.0};
  ComplexValue v{0.0, 0.0};

  double power() const { return std::norm(h) + std::norm(v); }
};

/// Beamsplitter port with power transmission T.
struct Tap {
  double transmission = 1.0;
};
/// Neutral-density filter.
struct Attenuator {
  double optical_density = 0.0;
};
/// Ideal lossless half-wave plate; fast axis angle from H.
struct HalfWavePlate {
  double axis_rad = 0.0;
};
/// Ideal linear polarizer; transmission axis angle from H.
struct Polarizer {
  double angle_rad = 0.0;
};

using Element = std::variant<Tap, Attenuator, HalfWavePlate, Polarizer>;
using ElementChain = std::vector<Element>;

/// Throws std::invalid_argument for T outside [0,1] or negative OD.
void validate(const Element& element);

JonesVector apply_element(const JonesVector& state, const Element& element);

/// Left-to-right fold of apply_element; the empty chain is the identity.
JonesVector propagate_chain(const JonesVector& input, const ElementChain& chain);

std::string describe(const Element& element);

}  // namespace twopath::optics

#endif  // TWOPATH_OPTICS_HPP
