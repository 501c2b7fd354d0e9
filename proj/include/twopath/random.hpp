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

#ifndef TWOPATH_RANDOM_HPP
#define TWOPATH_RANDOM_HPP

#include <cstdint>
#include <random>

namespace twopath {

/*
 * Count stream "mt64-ptrs/1": std::mt19937_64 (output fixed by the C++
 * standard), 53-bit uniforms, Poisson by sequential inversion below mean 10
 * and Hormann's PTRS transformed rejection above. Bump kCountStreamVersion
 * whenever any of these change, since it alters every simulated table.
 */
inline constexpr const char* kCountStreamName = "mt64-ptrs";
inline constexpr int kCountStreamVersion = 1;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for record `index` of a run started from `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class CountStream {
 public:
  explicit CountStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t poisson_inversion(double mean);
  std::uint64_t poisson_ptrs(double mean);

  std::mt19937_64 engine_;
};

}  // namespace twopath

#endif  // TWOPATH_RANDOM_HPP
