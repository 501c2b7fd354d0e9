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

#ifndef TWOPATH_FOCK_HPP
#define TWOPATH_FOCK_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "twopath/model.hpp"

namespace twopath {

inline constexpr int kDefaultFockCutoff = 8;
inline constexpr double kMaxTruncationLoss = 1e-9;

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double loss)
      : std::runtime_error(what), loss_(loss) {}
  double loss() const { return loss_; }

 private:
  double loss_;
};

/// Joint photon-number distribution P(n_H, n_V), 0 <= n <= n_max.
class FockDistribution {
 public:
  FockDistribution(int n_max, std::vector<double> probs, double truncation_loss);

  int n_max() const { return n_max_; }
  double operator()(int n_h, int n_v) const {
    return probs_[static_cast<std::size_t>(n_h) * (n_max_ + 1) + n_v];
  }
  double total() const;
  /// P(n_H >= 1 and n_V >= 1), the coincidence proxy.
  double both_occupied() const;
  double mean_h() const;
  double mean_v() const;
  /// Estimated probability lost to the photon-number cutoff.
  double truncation_loss() const { return truncation_loss_; }

 private:
  int n_max_;
  std::vector<double> probs_;
  double truncation_loss_;
};

/*
 * Exact reference for pair_probability. Builds the two-mode coherent state
 * (alpha_h, alpha_v) in a number basis truncated at n_max per mode and applies
 * exp(xi a^dag b^dag - conj(xi) a b) with xi = epsilon exp(i(pump_phase + phi)).
 * Multi-pair and higher LO photon-number terms are kept.
 *
 * Throws TruncationError if the estimated truncation loss exceeds 1e-9 and
 * std::invalid_argument for n_max < 4.
 */
FockDistribution fock_oracle(const SourceParams& src, double phi, int n_max = kDefaultFockCutoff);

}  // namespace twopath

#endif  // TWOPATH_FOCK_HPP
