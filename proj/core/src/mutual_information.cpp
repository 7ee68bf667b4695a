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

#include "qprecode/mutual_information.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qprecode {

namespace {

double axis_std(std::span<const cd> v, bool imag) {
  double mean = 0.0;
  for (const cd& z : v) mean += imag ? z.imag() : z.real();
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (const cd& z : v) {
    const double d = (imag ? z.imag() : z.real()) - mean;
    var += d * d;
  }
  return std::sqrt(var / static_cast<double>(v.size() - 1));
}

int cell_index(double v, double lo, double width, int bins) {
  const double pos = std::floor((v - lo) / width);
  return static_cast<int>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
}

// Bin edges splitting the sorted values into equal-count groups.
std::vector<double> quantile_edges(std::vector<double> values, int bins) {
  std::sort(values.begin(), values.end());
  std::vector<double> edges;
  for (int k = 1; k < bins; ++k) {
    const std::size_t idx = values.size() * static_cast<std::size_t>(k) /
                            static_cast<std::size_t>(bins);
    edges.push_back(values[idx]);
  }
  return edges;
}

int bin_of(double v, const std::vector<double>& edges) {
  return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
}

}  // namespace

double histogram_entropy(std::span<const cd> v, int bins, double span) {
  if (v.size() < 2) throw std::invalid_argument("histogram_entropy: need at least 2 samples");
  if (bins < 1 || !(span > 0.0)) throw std::invalid_argument("histogram_entropy: bad grid");
  double re_mean = 0.0;
  double im_mean = 0.0;
  for (const cd& z : v) {
    re_mean += z.real();
    im_mean += z.imag();
  }
  re_mean /= static_cast<double>(v.size());
  im_mean /= static_cast<double>(v.size());
  const double re_std = axis_std(v, false);
  const double im_std = axis_std(v, true);
  if (!(re_std > 0.0) || !(im_std > 0.0)) {
    throw std::invalid_argument("histogram_entropy: zero-variance samples");
  }
  const double re_w = 2.0 * span * re_std / bins;
  const double im_w = 2.0 * span * im_std / bins;
  const double re_lo = re_mean - span * re_std;
  const double im_lo = im_mean - span * im_std;

  std::vector<long long> counts(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0);
  for (const cd& z : v) {
    const int i = cell_index(z.real(), re_lo, re_w, bins);
    const int j = cell_index(z.imag(), im_lo, im_w, bins);
    ++counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(bins) + static_cast<std::size_t>(j)];
  }
  const double n = static_cast<double>(v.size());
  double h = 0.0;
  long long occupied = 0;
  for (const long long c : counts) {
    if (c == 0) continue;
    ++occupied;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  // Miller-Madow correction plus the log cell area for a density.
  return h + static_cast<double>(occupied - 1) / (2.0 * n) + std::log(re_w * im_w);
}

double histogram_mutual_information(std::span<const cd> s, std::span<const cd> s_hat,
                                    const MiOptions& opts) {
  if (s.size() != s_hat.size()) {
    throw std::invalid_argument("histogram_mutual_information: length mismatch");
  }
  if (opts.symbol_bins < 1) throw std::invalid_argument("histogram_mutual_information: bad bins");
  const std::size_t n = s.size();
  const std::size_t nbins = static_cast<std::size_t>(opts.symbol_bins) *
                            static_cast<std::size_t>(opts.symbol_bins);
  if (n < 2 * nbins) throw std::invalid_argument("histogram_mutual_information: too few samples");

  cd num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    num += s_hat[t] * std::conj(s[t]);
    den += std::norm(s[t]);
  }
  if (!(den > 0.0) || num == cd(0.0)) {
    throw std::invalid_argument("histogram_mutual_information: degenerate input");
  }
  const cd gain = num / den;

  std::vector<cd> out(n);
  std::vector<double> re(n);
  std::vector<double> im(n);
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = s_hat[t] / gain;
    re[t] = s[t].real();
    im[t] = s[t].imag();
  }
  const double h_out = histogram_entropy(out, opts.output_bins, opts.output_span);

  const std::vector<double> re_edges = quantile_edges(re, opts.symbol_bins);
  const std::vector<double> im_edges = quantile_edges(im, opts.symbol_bins);
  std::vector<std::vector<cd>> errors(nbins);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t b = static_cast<std::size_t>(bin_of(re[t], re_edges)) *
                              static_cast<std::size_t>(opts.symbol_bins) +
                          static_cast<std::size_t>(bin_of(im[t], im_edges));
    errors[b].push_back(out[t] - s[t]);
  }
  double h_cond = 0.0;
  for (const auto& w : errors) {
    // Discrete inputs can leave some bins empty; they carry no weight.
    if (w.size() < 2) continue;
    h_cond += static_cast<double>(w.size()) / static_cast<double>(n) *
              histogram_entropy(w, opts.error_bins, opts.error_span);
  }
  return (h_out - h_cond) / std::numbers::ln2;
}

}  // namespace qprecode
