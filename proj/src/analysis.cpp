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

#include "twopath/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "twopath/model.hpp"
#include "twopath/random.hpp"

namespace twopath::analysis {

Channel parse_channel(const std::string& name) {
  if (name == "cc" || name == "coincidence") return Channel::kCoincidence;
  if (name == "a") return Channel::kSinglesA;
  if (name == "b") return Channel::kSinglesB;
  throw std::invalid_argument("unknown channel '" + name + "' (expected cc, a or b)");
}

std::string channel_name(Channel channel) {
  switch (channel) {
    case Channel::kSinglesA:
      return "a";
    case Channel::kSinglesB:
      return "b";
    case Channel::kCoincidence:
      return "cc";
  }
  return "?";
}

std::vector<FringeSample> to_samples(std::span<const detection::ScanRecord> records,
                                     Channel channel) {
  std::vector<FringeSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!(r.integration_time_s > 0.0))
      throw std::invalid_argument("scan record has nonpositive integration time");
    std::uint64_t n = 0;
    switch (channel) {
      case Channel::kSinglesA:
        n = r.counts_a;
        break;
      case Channel::kSinglesB:
        n = r.counts_b;
        break;
      case Channel::kCoincidence:
        n = r.counts_cc;
        break;
    }
    const double counts = static_cast<double>(n);
    out.push_back({r.delay_s, counts / r.integration_time_s,
                   std::sqrt(std::max(counts, 1.0)) / r.integration_time_s});
  }
  return out;
}

double FringeFit::evaluate(double delay_s) const {
  return offset_c.value +
         amplitude_a.value * std::cos(2.0 * kPi * delay_s / period.value + phase0.value);
}

namespace {

// Internally the model is C + a cos(k x) + b sin(k x) with x = (t - t0) / P0,
// so a, b are linear and k ~ 2 pi. No A <-> -A degeneracy in this form.
struct Problem {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd w;  // 1 / sigma
  double t0 = 0.0;
  double p0 = 1.0;
};

struct Linear {
  Eigen::Vector3d coef;
  double chi2 = 0.0;
};

Linear solve_linear(const Problem& pb, double k) {
  const Eigen::Index n = pb.x.size();
  Eigen::MatrixXd design(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = pb.w(i);
    design(i, 1) = pb.w(i) * std::cos(k * pb.x(i));
    design(i, 2) = pb.w(i) * std::sin(k * pb.x(i));
  }
  const Eigen::VectorXd rhs = pb.y.cwiseProduct(pb.w);
  Linear out;
  out.coef = design.colPivHouseholderQr().solve(rhs);
  out.chi2 = (design * out.coef - rhs).squaredNorm();
  return out;
}

void residuals(const Problem& pb, const Eigen::Vector4d& p, Eigen::VectorXd& r,
               Eigen::MatrixXd& jac) {
  const Eigen::Index n = pb.x.size();
  r.resize(n);
  jac.resize(n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = std::cos(p(3) * pb.x(i));
    const double s = std::sin(p(3) * pb.x(i));
    const double w = pb.w(i);
    r(i) = w * (p(0) + p(1) * c + p(2) * s - pb.y(i));
    jac(i, 0) = w;
    jac(i, 1) = w * c;
    jac(i, 2) = w * s;
    jac(i, 3) = w * pb.x(i) * (-p(1) * s + p(2) * c);
  }
}

struct LmResult {
  Eigen::Vector4d p;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
};

LmResult levenberg_marquardt(const Problem& pb, Eigen::Vector4d p, int max_iterations) {
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals(pb, p, r, jac);
  double chi2 = r.squaredNorm();
  double lambda = 1e-3;
  LmResult out;
  for (int it = 1; it <= max_iterations; ++it) {
    out.iterations = it;
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d grad = jac.transpose() * r;
    if (grad.cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, chi2)) {
      out.converged = true;
      break;
    }
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      Eigen::Matrix4d damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
      const Eigen::Vector4d step = damped.ldlt().solve(-grad);
      const Eigen::Vector4d trial = p + step;
      Eigen::VectorXd r_trial;
      Eigen::MatrixXd jac_trial;
      residuals(pb, trial, r_trial, jac_trial);
      const double chi2_trial = r_trial.squaredNorm();
      if (std::isfinite(chi2_trial) && chi2_trial <= chi2) {
        const double drop = chi2 - chi2_trial;
        const double rel_step = step.norm() / (p.norm() + 1e-300);
        p = trial;
        r = std::move(r_trial);
        jac = std::move(jac_trial);
        chi2 = chi2_trial;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        if (drop <= 1e-15 * std::max(1.0, chi2) && rel_step < 1e-12) out.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) {
      // No downhill step at any damping: already at the minimum to rounding.
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }
  out.p = p;
  out.chi2 = chi2;
  return out;
}

// Candidate k values: local minima of the profiled chi^2 over a grid, best first.
std::vector<double> grid_starts(const Problem& pb, const FitOptions& opt) {
  const int n = std::max(opt.grid_points, 3);
  std::vector<double> ks(n), chi(n);
  for (int i = 0; i < n; ++i) {
    const double rel = 1.0 - opt.period_window + 2.0 * opt.period_window * i / (n - 1);
    ks[i] = 2.0 * kPi / rel;
    chi[i] = solve_linear(pb, ks[i]).chi2;
  }
  std::vector<int> minima;
  for (int i = 0; i < n; ++i) {
    const bool left = i == 0 || chi[i] <= chi[i - 1];
    const bool right = i == n - 1 || chi[i] <= chi[i + 1];
    if (left && right) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return chi[a] < chi[b]; });
  std::vector<double> out;
  for (int i : minima) out.push_back(ks[i]);
  return out;
}

void check_inputs(std::span<const FringeSample> samples, const FitOptions& opt) {
  if (!(opt.period_guess_s > 0.0)) throw FitError("fit: period guess must be positive");
  if (samples.size() < 8) {
    std::ostringstream msg;
    msg << "fit: need at least 8 scan points, got " << samples.size();
    throw FitError(msg.str());
  }
  const auto [lo, hi] = std::minmax_element(
      samples.begin(), samples.end(),
      [](const FringeSample& a, const FringeSample& b) { return a.delay_s < b.delay_s; });
  const double span = hi->delay_s - lo->delay_s;
  if (span <= 0.0) throw FitError("fit: degenerate scan, all points at a single delay");
  if (span < opt.period_guess_s * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "fit: scan spans " << span << " s, less than one period (" << opt.period_guess_s
        << " s)";
    throw FitError(msg.str());
  }
  for (const auto& s : samples) {
    if (!(s.sigma_hz > 0.0) || !std::isfinite(s.rate_hz))
      throw FitError("fit: samples need finite rates and positive sigma");
  }
}

}  // namespace

FringeFit fit_samples(std::span<const FringeSample> samples, const FitOptions& opt) {
  check_inputs(samples, opt);
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Problem pb;
  pb.p0 = opt.period_guess_s;
  pb.t0 = std::accumulate(samples.begin(), samples.end(), 0.0,
                          [](double acc, const FringeSample& s) { return acc + s.delay_s; }) /
          static_cast<double>(n);
  pb.x.resize(n);
  pb.y.resize(n);
  pb.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    pb.x(i) = (samples[i].delay_s - pb.t0) / pb.p0;
    pb.y(i) = samples[i].rate_hz;
    pb.w(i) = 1.0 / samples[i].sigma_hz;
  }

  Eigen::Vector4d best;
  double best_chi2 = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int restarts = 0;
  if (opt.fix_period) {
    const Linear lin = solve_linear(pb, 2.0 * kPi);
    best << lin.coef, 2.0 * kPi;
    best_chi2 = lin.chi2;
  } else {
    const std::vector<double> starts = grid_starts(pb, opt);
    bool any = false;
    std::ostringstream diag;
    for (double k0 : starts) {
      if (restarts >= opt.max_restarts) break;
      ++restarts;
      const Linear lin = solve_linear(pb, k0);
      Eigen::Vector4d p0;
      p0 << lin.coef, k0;
      const LmResult lm = levenberg_marquardt(pb, p0, opt.max_iterations);
      iterations += lm.iterations;
      diag << " [start period " << 2.0 * kPi / k0 * pb.p0 << " s: chi2 " << lm.chi2
           << (lm.converged ? ", converged" : ", not converged") << "]";
      if (!lm.converged) continue;
      const double period_rel = 2.0 * kPi / lm.p(3);
      if (!(period_rel > 0.0)) continue;
      any = true;
      if (lm.chi2 < best_chi2) {
        best_chi2 = lm.chi2;
        best = lm.p;
      }
    }
    if (!any) throw FitError("fit: no start converged after " + std::to_string(restarts) +
                             " restarts;" + diag.str());
  }

  // Curvature of chi^2/2 in the internal parameters.
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals(pb, best, r, jac);
  const int n_free = opt.fix_period ? 3 : 4;
  Eigen::Matrix4d cov_int = Eigen::Matrix4d::Zero();
  {
    const Eigen::MatrixXd j = jac.leftCols(n_free);
    const Eigen::MatrixXd info = j.transpose() * j;
    cov_int.topLeftCorner(n_free, n_free) = info.completeOrthogonalDecomposition().pseudoInverse();
  }

  const double c = best(0), a = best(1), b = best(2), k = best(3);
  const double amp = std::hypot(a, b);
  const double period = 2.0 * kPi / k * pb.p0;
  // phase0 refers to absolute delay: A cos(2 pi t / P + phase0).
  const double phase = std::remainder(std::atan2(-b, a) - k * pb.t0 / pb.p0, 2.0 * kPi);

  // d(C, A, P, phase0) / d(C, a, b, k)
  Eigen::Matrix4d jt = Eigen::Matrix4d::Zero();
  jt(0, 0) = 1.0;
  if (amp > 0.0) {
    jt(1, 1) = a / amp;
    jt(1, 2) = b / amp;
    jt(3, 1) = b / (amp * amp);
    jt(3, 2) = -a / (amp * amp);
  }
  jt(2, 3) = -2.0 * kPi / (k * k) * pb.p0;
  jt(3, 3) = -pb.t0 / pb.p0;
  Eigen::Matrix4d cov = jt * cov_int * jt.transpose();
  if (amp == 0.0) {
    cov(1, 1) = 0.5 * (cov_int(1, 1) + cov_int(2, 2));
    cov(3, 3) = std::numeric_limits<double>::infinity();
  }

  FringeFit fit;
  fit.offset_c = {c, std::sqrt(std::max(0.0, cov(0, 0)))};
  fit.amplitude_a = {amp, std::sqrt(std::max(0.0, cov(1, 1)))};
  fit.period = {period, std::sqrt(std::max(0.0, cov(2, 2)))};
  fit.phase0 = {phase, std::sqrt(std::max(0.0, cov(3, 3)))};
  fit.chi2 = best_chi2;
  fit.dof = static_cast<int>(n) - n_free;
  fit.reduced_chi2 = fit.dof > 0 ? best_chi2 / fit.dof : 0.0;
  fit.iterations = iterations;
  fit.restarts = restarts;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) fit.covariance[i][j] = cov(i, j);
  return fit;
}

FringeFit fit_fringe(std::span<const detection::ScanRecord> records, Channel channel,
                     const FitOptions& options) {
  const auto samples = to_samples(records, channel);
  return fit_samples(samples, options);
}

VisibilityReport visibility(const FringeFit& fit, double accidental_rate_hz) {
  if (!(accidental_rate_hz >= 0.0))
    throw std::invalid_argument("visibility: accidental rate must be nonnegative");
  const double c = fit.offset_c.value;
  const double a = fit.amplitude_a.value;
  if (!(c > accidental_rate_hz)) {
    std::ostringstream msg;
    msg << "visibility: offset " << c << " Hz does not exceed accidental rate "
        << accidental_rate_hz << " Hz; correction invalid";
    throw std::invalid_argument(msg.str());
  }
  const double var_c = fit.cov(kOffset, kOffset);
  const double var_a = fit.cov(kAmplitude, kAmplitude);
  const double cov_ca = fit.cov(kOffset, kAmplitude);
  auto ratio = [&](double denom) {
    const double v = a / denom;
    const double var = var_a / (denom * denom) + a * a * var_c / std::pow(denom, 4) -
                       2.0 * a * cov_ca / std::pow(denom, 3);
    return Estimate{v, std::sqrt(std::max(0.0, var))};
  };
  VisibilityReport out;
  out.raw = ratio(c);
  out.corrected = ratio(c - accidental_rate_hz);
  out.accidental_rate_used = accidental_rate_hz;
  return out;
}

double accidentals_from_records(std::span<const detection::ScanRecord> records, double window_s) {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : records) {
    const double t = r.integration_time_s;
    sum += (static_cast<double>(r.counts_a) / t) * (static_cast<double>(r.counts_b) / t);
  }
  return sum / static_cast<double>(records.size()) * window_s;
}

namespace {

double min_variance(const FringeFit& fit) {
  return fit.cov(kOffset, kOffset) + fit.cov(kAmplitude, kAmplitude) -
         2.0 * fit.cov(kOffset, kAmplitude);
}

double max_variance(const FringeFit& fit) {
  return fit.cov(kOffset, kOffset) + fit.cov(kAmplitude, kAmplitude) +
         2.0 * fit.cov(kOffset, kAmplitude);
}

}  // namespace

UpconversionReport upconversion_fraction(const FringeFit& fit, double lo_coinc_hz,
                                         double dc_coinc_hz, double accidental_rate_hz,
                                         double lo_coinc_stderr_hz) {
  if (!(lo_coinc_hz > 0.0))
    throw std::invalid_argument("upconversion_fraction: LO coincidence rate must be positive");
  const double r_min = fit.offset_c.value - accidental_rate_hz - fit.amplitude_a.value;
  const double var_min = std::max(0.0, min_variance(fit));
  const double removed = lo_coinc_hz - r_min;

  UpconversionReport out;
  out.corrected_minimum = {r_min, std::sqrt(var_min)};
  const double var_frac = var_min / (lo_coinc_hz * lo_coinc_hz) +
                          std::pow(r_min * lo_coinc_stderr_hz / (lo_coinc_hz * lo_coinc_hz), 2);
  out.fraction = {std::max(0.0, removed) / lo_coinc_hz, std::sqrt(var_frac)};
  out.equivalent_form = (fit.amplitude_a.value - dc_coinc_hz) / lo_coinc_hz;
  const double sigma = std::sqrt(var_min + lo_coinc_stderr_hz * lo_coinc_stderr_hz);
  out.significance_below_lo = sigma > 0.0 ? removed / sigma
                                          : (removed > 0.0   ? std::numeric_limits<double>::infinity()
                                             : removed < 0.0 ? -std::numeric_limits<double>::infinity()
                                                             : 0.0);
  out.inconsistent = r_min > lo_coinc_hz + dc_coinc_hz;
  return out;
}

namespace {

ExtremumCheck make_check(double margin, double variance) {
  ExtremumCheck out;
  out.passed = margin > 0.0;
  out.margin = {margin, std::sqrt(std::max(0.0, variance))};
  out.significance = out.margin.sigma > 0.0 ? margin / out.margin.sigma : 0.0;
  return out;
}

}  // namespace

ExtremumCheck enhancement_check(const FringeFit& fit, double lo_coinc_hz, double dc_coinc_hz,
                                double accidental_rate_hz) {
  const double peak = fit.offset_c.value - accidental_rate_hz + fit.amplitude_a.value;
  return make_check(peak - (lo_coinc_hz + dc_coinc_hz), max_variance(fit));
}

ExtremumCheck suppression_check(const FringeFit& fit, double lo_coinc_hz, double dc_coinc_hz,
                                double accidental_rate_hz) {
  const double trough = fit.offset_c.value - accidental_rate_hz - fit.amplitude_a.value;
  return make_check((lo_coinc_hz + dc_coinc_hz) - trough, min_variance(fit));
}

VisibilityReport bootstrap_visibility(std::span<const FringeSample> samples,
                                      const FitOptions& options, double accidental_rate_hz,
                                      int resamples, std::uint64_t seed) {
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least 2 resamples");
  const FringeFit base = fit_samples(samples, options);
  VisibilityReport out = visibility(base, accidental_rate_hz);

  std::vector<double> raw, corrected;
  std::vector<FringeSample> draw(samples.size());
  for (int b = 0; b < resamples; ++b) {
    CountStream stream(derive_seed(seed, static_cast<std::uint64_t>(b)));
    for (auto& s : draw) {
      const auto idx = static_cast<std::size_t>(stream.uniform() * samples.size());
      s = samples[std::min(idx, samples.size() - 1)];
    }
    try {
      const VisibilityReport v = visibility(fit_samples(draw, options), accidental_rate_hz);
      raw.push_back(v.raw.value);
      corrected.push_back(v.corrected.value);
    } catch (const std::exception&) {
      // Degenerate resample (e.g. too few distinct delays); skip it.
    }
  }
  auto stddev = [](const std::vector<double>& xs) {
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (xs.size() - 1));
  };
  out.raw.sigma = stddev(raw);
  out.corrected.sigma = stddev(corrected);
  return out;
}

}  // namespace twopath::analysis
