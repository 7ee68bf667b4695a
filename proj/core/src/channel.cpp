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

#include "qprecode/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qprecode {

ChannelRealization::ChannelRealization(CMat H) : H_(std::move(H)) {
  if (H_.rows() < 1 || H_.cols() < 1) {
    throw std::invalid_argument("channel: empty matrix");
  }
  if (H_.cols() < H_.rows()) {
    throw std::invalid_argument("channel: need B >= U, got U=" +
                                std::to_string(H_.rows()) +
                                " B=" + std::to_string(H_.cols()));
  }
}

NoiseModel::NoiseModel(double n0, double power) : N0(n0), P(power) {
  if (!(n0 > 0.0) || !(power > 0.0)) {
    throw std::invalid_argument("noise model: N0 and P must be positive");
  }
}

NoiseModel NoiseModel::from_snr_db(double snr_db, double power) {
  return NoiseModel(power * std::pow(10.0, -snr_db / 10.0), power);
}

Constellation Constellation::qpsk() {
  const double a = 1.0 / std::numbers::sqrt2;
  return {ConstellationKind::Qpsk, {{a, a}, {-a, a}, {-a, -a}, {a, -a}}};
}

Constellation Constellation::gaussian() { return {ConstellationKind::Gaussian, {}}; }

ChannelRealization sample_channel(int U, int B, Rng& rng) {
  if (U < 1 || B < 1) {
    throw std::invalid_argument("sample_channel: U and B must be >= 1");
  }
  CMat H(U, B);
  // Column-major fill; the draw order is part of the reproducibility contract.
  for (int b = 0; b < B; ++b) {
    for (int u = 0; u < U; ++u) H(u, b) = rng.complex_normal(1.0);
  }
  return ChannelRealization(std::move(H));
}

CVec apply_channel(const ChannelRealization& ch, const CVec& x,
                   const CVec& noise) {
  if (x.size() != ch.antennas() || noise.size() != ch.users()) {
    throw std::invalid_argument("apply_channel: dimension mismatch");
  }
  return ch.matrix() * x + noise;
}

CVec apply_channel(const ChannelRealization& ch, const CVec& x,
                   const NoiseModel& noise, Rng& rng) {
  if (x.size() != ch.antennas()) {
    throw std::invalid_argument("apply_channel: x has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(ch.antennas()));
  }
  CVec n(ch.users());
  for (int u = 0; u < ch.users(); ++u) n(u) = rng.complex_normal(noise.N0);
  return ch.matrix() * x + n;
}

ChannelRealization corrupt_csi(const ChannelRealization& ch, double eps,
                               Rng& rng) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("corrupt_csi: eps must lie in [0, 1]");
  }
  if (eps == 0.0) return ch;
  const double keep = std::sqrt(1.0 - eps);
  const double mix = std::sqrt(eps);
  CMat out(ch.users(), ch.antennas());
  for (int b = 0; b < ch.antennas(); ++b) {
    for (int u = 0; u < ch.users(); ++u) {
      out(u, b) = keep * ch.matrix()(u, b) + mix * rng.complex_normal(1.0);
    }
  }
  return ChannelRealization(std::move(out));
}

CVec sample_symbols(const Constellation& c, int U, Rng& rng) {
  if (U < 1) throw std::invalid_argument("sample_symbols: U must be >= 1");
  CVec s(U);
  if (c.kind == ConstellationKind::Gaussian) {
    for (int u = 0; u < U; ++u) s(u) = rng.complex_normal(1.0);
    return s;
  }
  if (c.points.empty()) throw std::invalid_argument("sample_symbols: empty constellation");
  std::uniform_int_distribution<std::size_t> pick(0, c.points.size() - 1);
  for (int u = 0; u < U; ++u) s(u) = c.points[pick(rng.engine())];
  return s;
}

}  // namespace qprecode
