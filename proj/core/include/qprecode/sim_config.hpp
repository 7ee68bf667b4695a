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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qprecode/linear_precoding.hpp"
#include "qprecode/mutual_information.hpp"
#include "qprecode/nonlinear_precoding.hpp"

namespace qprecode {

using PrecoderKind = std::variant<LinearKind, NonlinearMethod>;

std::string precoder_tag(const PrecoderKind& kind);
/// Accepts WF, ZF, MRT, Exhaustive (or EXH), SDR1, SDRr, SQUID, SP; case
/// insensitive. Throws ConfigError on anything else.
PrecoderKind parse_precoder(std::string_view tag);

enum class SweepKind { Ber, Rate, Csi, Analytic };

struct SimConfig {
  int B = 128;
  int U = 16;
  int levels = 2;  // 0 means infinite resolution
  double power = 1.0;
  std::vector<double> snr_db;
  long long trials_per_point = 10000;
  int channels_per_point = 10;
  std::vector<PrecoderKind> precoders;
  std::vector<double> csi_eps;
  std::uint64_t seed = 1;
  int threads = 1;

  // Adaptive BER budget: stop once this many bit errors are seen (0 runs
  // the full budget). Trials are issued in blocks of block_trials per
  // channel.
  long long min_errors = 200;
  int block_trials = 100;

  SquidOptions squid{};
  // Sweeps only need the relaxed solution accurately enough to round it,
  // so the solver runs with a looser tolerance than its library default.
  SdrOptions sdr{.solver = SdpOptions{.tol = 1e-4}};
  SphereOptions sphere{};
  // Samples per channel for the rate sweep.
  long long mi_samples = 100000;
  MiOptions mi{};

  bool infinite_resolution() const { return levels == 0; }
  /// Throws ConfigError if the configuration cannot run as the given sweep.
  void validate(SweepKind sweep) const;
};

/// "a,b,c" or "start:step:stop" (inclusive, in dB).
std::vector<double> parse_number_list(std::string_view text);
/// Integer L >= 2 or "inf" (returned as 0).
int parse_levels(std::string_view text);
std::vector<PrecoderKind> parse_precoder_list(std::string_view text);

/// Flat "key = value" text, '#' starts a comment. Later keys override
/// earlier ones.
std::map<std::string, std::string> parse_config_text(std::string_view text);
std::map<std::string, std::string> load_config_file(const std::string& path);

/// Applies key/value entries (keys as in the config file, e.g. "b", "snr",
/// "levels", "squid_iters"). Throws ConfigError on unknown keys or
/// malformed values.
void apply_config(SimConfig& cfg, const std::map<std::string, std::string>& entries);

}  // namespace qprecode
