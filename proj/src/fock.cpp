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

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

namespace twopath {

FockDistribution::FockDistribution(int n_max, std::vector<double> probs, double truncation_loss)
    : n_max_(n_max), probs_(std::move(probs)), truncation_loss_(truncation_loss) {
  if (probs_.size() != static_cast<std::size_t>((n_max + 1) * (n_max + 1))) {
    throw std::invalid_argument("FockDistribution: size does not match cutoff");
  }
}

double FockDistribution::total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

double FockDistribution::both_occupied() const {
  double sum = 0.0;
  for (int h = 1; h <= n_max_; ++h)
    for (int v = 1; v <= n_max_; ++v) sum += (*this)(h, v);
  return sum;
}

double FockDistribution::mean_h() const {
  double sum = 0.0;
  for (int h = 0; h <= n_max_; ++h)
    for (int v = 0; v <= n_max_; ++v) sum += h * (*this)(h, v);
  return sum;
}

double FockDistribution::mean_v() const {
  double sum = 0.0;
  for (int h = 0; h <= n_max_; ++h)
    for (int v = 0; v <= n_max_; ++v) sum += v * (*this)(h, v);
  return sum;
}

namespace {

// Truncated coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!).
Eigen::VectorXcd coherent_amplitudes(ComplexValue alpha, int n_max) {
  Eigen::VectorXcd c(n_max + 1);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= n_max; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

}  // namespace

FockDistribution fock_oracle(const SourceParams& src, double phi, int n_max) {
  src.validate();
  if (n_max < 4) {
    throw std::invalid_argument("fock_oracle: n_max must be at least 4");
  }
  const int d = n_max + 1;
  const int dim = d * d;
  auto index = [d](int h, int v) { return h * d + v; };

  const Eigen::VectorXcd ch = coherent_amplitudes(src.alpha_h, n_max);
  const Eigen::VectorXcd cv = coherent_amplitudes(src.alpha_v, n_max);
  Eigen::VectorXcd psi(dim);
  for (int h = 0; h < d; ++h)
    for (int v = 0; v < d; ++v) psi(index(h, v)) = ch(h) * cv(v);
  const double input_loss = std::max(0.0, 1.0 - psi.squaredNorm());

  // Generator xi a^dag b^dag - conj(xi) a b on the truncated product basis.
  const ComplexValue xi = std::polar(src.epsilon, src.pump_phase + phi);
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (int h = 0; h < n_max; ++h) {
    for (int v = 0; v < n_max; ++v) {
      const double m = std::sqrt(static_cast<double>((h + 1) * (v + 1)));
      gen(index(h + 1, v + 1), index(h, v)) += xi * m;
      gen(index(h, v), index(h + 1, v + 1)) -= std::conj(xi) * m;
    }
  }
  const Eigen::VectorXcd out = gen.exp() * psi;

  std::vector<double> probs(static_cast<std::size_t>(dim));
  double boundary = 0.0;
  for (int h = 0; h < d; ++h) {
    for (int v = 0; v < d; ++v) {
      const double p = std::norm(out(index(h, v)));
      probs[static_cast<std::size_t>(index(h, v))] = p;
      if (h == n_max || v == n_max) boundary += p;
    }
  }
  const double loss = input_loss + boundary;
  if (loss > kMaxTruncationLoss) {
    std::ostringstream msg;
    msg << "fock_oracle: truncation loss " << loss << " at n_max=" << n_max
        << " exceeds " << kMaxTruncationLoss << "; raise the cutoff";
    throw TruncationError(msg.str(), loss);
  }
  return FockDistribution(n_max, std::move(probs), loss);
}

}  // namespace twopath
