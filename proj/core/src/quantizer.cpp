// Copyright 2026 The qprecode Authors
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

#include "qprecode/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qprecode/numerics.hpp"

namespace qprecode {

double QuantizerSpec::bits() const { return std::log2(static_cast<double>(levels)); }

double QuantizerSpec::quantize_real(double v) const {
  // Number of thresholds <= v selects the half-open cell [tau_k, tau_{k+1}).
  const auto k = std::upper_bound(thresholds.begin(), thresholds.end(), v) -
                 thresholds.begin();
  return labels[static_cast<std::size_t>(k)];
}

QuantizerSpec make_uniform_quantizer(int levels, double delta, double alpha) {
  if (levels < 2) throw std::invalid_argument("quantizer: need L >= 2");
  if (!(delta > 0.0) || !(alpha > 0.0)) {
    throw std::invalid_argument("quantizer: delta and alpha must be positive");
  }
  QuantizerSpec q;
  q.levels = levels;
  q.delta = delta;
  q.alpha = alpha;
  q.labels.resize(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) {
    q.labels[static_cast<std::size_t>(i)] = alpha * delta * (i - (levels - 1) / 2.0);
  }
  q.thresholds.resize(static_cast<std::size_t>(levels - 1));
  for (int i = 1; i < levels; ++i) {
    q.thresholds[static_cast<std::size_t>(i - 1)] = delta * (i - levels / 2.0);
  }
  return q;
}

namespace {

// E[Q(w)^2] for the unit-scale quantizer and w ~ N(0, sigma^2).
double second_moment(int levels, double delta, double sigma) {
  double m = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double lo = k == 0 ? -INFINITY : delta * (k - levels / 2.0) / sigma;
    const double hi = k == levels - 1 ? INFINITY : delta * (k + 1 - levels / 2.0) / sigma;
    const double p = std_normal_cdf(hi) - std_normal_cdf(lo);
    const double label = delta * (k - (levels - 1) / 2.0);
    m += label * label * p;
  }
  return m;
}

}  // namespace

double quantizer_mse(int levels, double delta, double variance) {
  const double sigma = std::sqrt(variance);
  // E[w Q(w)] = delta * sigma * sum_i phi(tau_i / sigma).
  double cross = 0.0;
  for (int i = 1; i < levels; ++i) {
    cross += std_normal_pdf(delta * (i - levels / 2.0) / sigma);
  }
  cross *= delta * sigma;
  return variance - 2.0 * cross + second_moment(levels, delta, sigma);
}

double optimize_step_size(int levels, double input_variance) {
  if (levels < 2) throw std::invalid_argument("optimize_step_size: need L >= 2");
  if (!(input_variance > 0.0)) {
    throw std::invalid_argument("optimize_step_size: variance must be positive");
  }
  const double sigma = std::sqrt(input_variance);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 8.0 * sigma;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = quantizer_mse(levels, c, input_variance);
  double fd = quantizer_mse(levels, d, input_variance);
  const double tol = 1e-6 * sigma;
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = quantizer_mse(levels, c, input_variance);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = quantizer_mse(levels, d, input_variance);
    }
  }
  return 0.5 * (a + b);
}

double gaussian_power_scale(int levels, double delta, int B, double P) {
  if (levels < 2 || !(delta > 0.0) || B < 1 || !(P > 0.0)) {
    throw std::invalid_argument("gaussian_power_scale: invalid arguments");
  }
  // Per real dimension the input is N(0, P/(2B)); E[Q(w)^2] in closed form
  // through Phi, then alpha^2 * 2B * E[Q(w)^2] = P.
  const double half = (levels - 1) / 2.0;
  const double scale = std::sqrt(2.0 * B / P) * delta;
  double sum = 0.0;
  for (int i = 1; i < levels; ++i) {
    const double t = i - levels / 2.0;
    sum += t * std_normal_cdf(scale * t);
  }
  const double moment = delta * delta * (half * half - 2.0 * sum);
  return std::sqrt(P / (2.0 * B * moment));
}

QuantizerSpec make_power_normalized_quantizer(int levels, int B, double P) {
  const double delta = optimize_step_size(levels, P / (2.0 * B));
  return make_uniform_quantizer(levels, delta, gaussian_power_scale(levels, delta, B, P));
}

CVec quantize(const QuantizerSpec& spec, const CVec& z) {
  CVec x(z.size());
  for (Eigen::Index b = 0; b < z.size(); ++b) {
    const double re = z(b).real();
    const double im = z(b).imag();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw std::invalid_argument("quantize: non-finite input");
    }
    x(b) = cd(spec.quantize_real(re), spec.quantize_real(im));
  }
  return x;
}

CVec quantize_one_bit(const CVec& z, double P, int B) {
  const double a = std::sqrt(P / (2.0 * B));
  CVec x(z.size());
  for (Eigen::Index b = 0; b < z.size(); ++b) {
    x(b) = cd(z(b).real() >= 0.0 ? a : -a, z(b).imag() >= 0.0 ? a : -a);
  }
  return x;
}

}  // namespace qprecode
