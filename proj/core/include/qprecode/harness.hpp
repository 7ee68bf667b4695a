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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qprecode/channel.hpp"
#include "qprecode/csv.hpp"
#include "qprecode/linear_precoding.hpp"
#include "qprecode/nonlinear_precoding.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/rng.hpp"
#include "qprecode/sim_config.hpp"

// Monte-Carlo sweeps. Random draws come from substreams keyed by
// (seed, stream, channel index, block index), so the same channels, symbols
// and unit-variance noise are reused across SNR points, CSI errors and
// precoders. Work is split into fixed-size tasks whose results are merged
// in task order, which makes every output independent of the thread count.

namespace qprecode {

/// Substream identifiers: Rng::substream(seed, stream, channel, block).
namespace streams {
inline constexpr std::uint64_t kChannelStream = 1;   // (c): channel c
inline constexpr std::uint64_t kTrialStream = 2;     // (c, k): symbols, then noise
inline constexpr std::uint64_t kCsiStream = 3;       // (c): CSI error of channel c
inline constexpr std::uint64_t kRoundingStream = 4;  // (c, k): randomized rounding
inline constexpr std::uint64_t kRateStream = 5;      // (c): rate-sweep samples
}  // namespace streams

/// One precoder bound to a channel estimate and noise level.
class PrecoderInstance {
 public:
  PrecoderInstance(const PrecoderKind& kind, const ChannelRealization& csi, double N0,
                   const SimConfig& cfg);

  /// Transmit vector for symbols s. rng feeds the randomized SDR rounding
  /// and is not touched by the other precoders.
  CVec operator()(const CVec& s, Rng& rng) const;

 private:
  PrecoderKind kind_;
  ChannelRealization csi_;
  double N0_;
  double P_;
  int levels_;
  LinearPrecoder linear_;
  QuantizerSpec quantizer_;
  std::optional<SquidPrecoder> squid_;
  SdrOptions sdr_;
  SphereOptions sphere_;
};

/// Runs fn(0..n-1) on up to `threads` worker threads. The first exception
/// thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Bit errors of quadrant decisions on y against QPSK symbols s (2 bits
/// per symbol, sgn(0) = +1).
long long count_bit_errors(const CVec& s, const CVec& y);

std::vector<ResultRow> run_ber_sweep(const SimConfig& cfg);
std::vector<ResultRow> run_rate_sweep(const SimConfig& cfg);
std::vector<ResultRow> run_csi_sweep(const SimConfig& cfg);
std::vector<ResultRow> analytic_curves(const SimConfig& cfg);

std::vector<ResultRow> run_sweep(SweepKind kind, const SimConfig& cfg);

}  // namespace qprecode
