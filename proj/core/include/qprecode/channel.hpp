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

#pragma once

#include <vector>

#include "qprecode/rng.hpp"
#include "qprecode/types.hpp"

namespace qprecode {

/// Downlink channel matrix of shape U x B (users x antennas).
class ChannelRealization {
 public:
  ChannelRealization() = default;
  /// Throws std::invalid_argument unless U >= 1 and B >= U.
  explicit ChannelRealization(CMat H);

  const CMat& matrix() const { return H_; }
  int users() const { return static_cast<int>(H_.rows()); }
  int antennas() const { return static_cast<int>(H_.cols()); }

 private:
  CMat H_;
};

struct NoiseModel {
  double N0 = 1.0;  // per complex entry
  double P = 1.0;   // total transmit power

  NoiseModel() = default;
  NoiseModel(double n0, double power);

  double snr() const { return P / N0; }
  /// P = power, N0 = P / 10^(snr_db/10).
  static NoiseModel from_snr_db(double snr_db, double power = 1.0);
};

enum class ConstellationKind { Qpsk, Gaussian };

struct Constellation {
  ConstellationKind kind = ConstellationKind::Qpsk;
  std::vector<cd> points;  // empty for the Gaussian codebook

  static Constellation qpsk();
  static Constellation gaussian();
};

/// I.i.d. CN(0,1) entries.
ChannelRealization sample_channel(int U, int B, Rng& rng);

/// y = Hx + n with n ~ CN(0, N0 I).
CVec apply_channel(const ChannelRealization& ch, const CVec& x,
                   const NoiseModel& noise, Rng& rng);
/// Same relation with an explicit noise vector.
CVec apply_channel(const ChannelRealization& ch, const CVec& x,
                   const CVec& noise);

/// sqrt(1-eps) H + sqrt(eps) Z with Z i.i.d. CN(0,1).
ChannelRealization corrupt_csi(const ChannelRealization& ch, double eps,
                               Rng& rng);

CVec sample_symbols(const Constellation& c, int U, Rng& rng);

}  // namespace qprecode
