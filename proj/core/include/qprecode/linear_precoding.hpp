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

#include <string_view>
#include <variant>

#include "qprecode/channel.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/types.hpp"

namespace qprecode {

enum class LinearKind { WF, ZF, MRT };

std::string_view to_string(LinearKind kind);

/// Precoding matrix (B x U) with tr(P P^H) = power, and the precoding
/// factor beta the receivers use to rescale.
struct LinearPrecoder {
  LinearKind kind = LinearKind::WF;
  CMat matrix;
  double beta = 1.0;
};

struct InfiniteResolution {};
using DacModel = std::variant<InfiniteResolution, QuantizerSpec>;

/// Wiener filter: H^H (H H^H + U N0/P I)^{-1} / beta.
LinearPrecoder wf_precoder(const ChannelRealization& ch, double N0, double P);
/// Zero forcing: pseudoinverse / beta. Throws on rank deficiency.
LinearPrecoder zf_precoder(const ChannelRealization& ch, double P);
/// Maximal ratio transmission: H^H / (beta B).
LinearPrecoder mrt_precoder(const ChannelRealization& ch, double P);

LinearPrecoder make_linear_precoder(LinearKind kind,
                                    const ChannelRealization& ch, double N0,
                                    double P);

/// x = Q(P s), or P s for infinite resolution.
CVec linear_quantized_precode(const LinearPrecoder& lp, const CVec& s,
                              const DacModel& dac);

}  // namespace qprecode
