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

#include "qprecode/sim_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <type_traits>

#include "qprecode/errors.hpp"

namespace qprecode {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_value(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError("non-finite " + std::string(what));
  }
  return value;
}

}  // namespace

std::string precoder_tag(const PrecoderKind& kind) {
  return std::visit([](auto k) { return std::string(to_string(k)); }, kind);
}

PrecoderKind parse_precoder(std::string_view tag) {
  const std::string t = lower(trim(tag));
  if (t == "wf") return LinearKind::WF;
  if (t == "zf") return LinearKind::ZF;
  if (t == "mrt") return LinearKind::MRT;
  if (t == "exhaustive" || t == "exh") return NonlinearMethod::Exhaustive;
  if (t == "sdr1") return NonlinearMethod::SDR1;
  if (t == "sdrr") return NonlinearMethod::SDRr;
  if (t == "squid") return NonlinearMethod::SQUID;
  if (t == "sp") return NonlinearMethod::SP;
  throw ConfigError("unknown precoder '" + std::string(tag) + "'");
}

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty number list");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:step:stop");
    const double start = parse_value<double>(parts[0], "range start");
    const double step = parse_value<double>(parts[1], "range step");
    const double stop = parse_value<double>(parts[2], "range stop");
    if (!(step > 0.0) || stop < start) throw ConfigError("range needs step > 0 and stop >= start");
    std::vector<double> out;
    // Index-based stepping avoids accumulating rounding; the tolerance keeps
    // an endpoint that is a whole number of steps away.
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    if (count > 100000) throw ConfigError("range has too many points");
    for (long long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto part : split(text, ',')) out.push_back(parse_value<double>(part, "number"));
  return out;
}

int parse_levels(std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "inf" || t == "infinite") return 0;
  const int L = parse_value<int>(t, "levels");
  if (L < 2) throw ConfigError("levels must be >= 2 or 'inf'");
  return L;
}

std::vector<PrecoderKind> parse_precoder_list(std::string_view text) {
  std::vector<PrecoderKind> out;
  for (const auto part : split(text, ',')) out.push_back(parse_precoder(part));
  return out;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> entries;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = lower(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    entries[key] = std::string(trim(line.substr(eq + 1)));
  }
  return entries;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_config(SimConfig& cfg, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "b") {
      cfg.B = parse_value<int>(value, key);
    } else if (key == "u") {
      cfg.U = parse_value<int>(value, key);
    } else if (key == "levels") {
      cfg.levels = parse_levels(value);
    } else if (key == "power") {
      cfg.power = parse_value<double>(value, key);
    } else if (key == "snr") {
      cfg.snr_db = parse_number_list(value);
    } else if (key == "trials") {
      cfg.trials_per_point = parse_value<long long>(value, key);
    } else if (key == "channels") {
      cfg.channels_per_point = parse_value<int>(value, key);
    } else if (key == "precoders") {
      cfg.precoders = parse_precoder_list(value);
    } else if (key == "eps") {
      cfg.csi_eps = parse_number_list(value);
    } else if (key == "seed") {
      cfg.seed = parse_value<std::uint64_t>(value, key);
    } else if (key == "threads") {
      cfg.threads = parse_value<int>(value, key);
    } else if (key == "min_errors") {
      cfg.min_errors = parse_value<long long>(value, key);
    } else if (key == "block_trials") {
      cfg.block_trials = parse_value<int>(value, key);
    } else if (key == "squid_iters") {
      cfg.squid.max_iters = parse_value<int>(value, key);
    } else if (key == "squid_stable_iters") {
      cfg.squid.stable_iters = parse_value<int>(value, key);
    } else if (key == "sdr_randomizations") {
      cfg.sdr.randomizations = parse_value<int>(value, key);
    } else if (key == "sdp_tol") {
      cfg.sdr.solver.tol = parse_value<double>(value, key);
    } else if (key == "sdp_max_iter") {
      cfg.sdr.solver.max_iter = parse_value<int>(value, key);
    } else if (key == "sp_max_outer") {
      cfg.sphere.max_outer = parse_value<int>(value, key);
    } else if (key == "mi_samples") {
      cfg.mi_samples = parse_value<long long>(value, key);
    } else if (key == "mi_output_bins") {
      cfg.mi.output_bins = parse_value<int>(value, key);
    } else if (key == "mi_symbol_bins") {
      cfg.mi.symbol_bins = parse_value<int>(value, key);
    } else if (key == "mi_error_bins") {
      cfg.mi.error_bins = parse_value<int>(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

void SimConfig::validate(SweepKind sweep) const {
  if (U < 1 || B < U) throw ConfigError("need 1 <= U <= B");
  if (levels != 0 && levels < 2) throw ConfigError("levels must be >= 2 or infinite");
  if (!(power > 0.0)) throw ConfigError("power must be positive");
  if (snr_db.empty()) throw ConfigError("SNR grid is empty");
  if (precoders.empty()) throw ConfigError("no precoders selected");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (sweep == SweepKind::Analytic) {
    for (const auto& p : precoders) {
      if (!std::holds_alternative<LinearKind>(p)) {
        throw ConfigError("analytic curves exist only for WF, ZF and MRT");
      }
    }
    return;
  }
  if (trials_per_point < 1) throw ConfigError("trials must be >= 1");
  if (channels_per_point < 1) throw ConfigError("channels must be >= 1");
  if (block_trials < 1) throw ConfigError("block_trials must be >= 1");
  if (min_errors < 0) throw ConfigError("min_errors must be >= 0");
  for (const auto& p : precoders) {
    if (const auto* m = std::get_if<NonlinearMethod>(&p)) {
      if (levels != 2) throw ConfigError("nonlinear precoders require 1-bit DACs (levels = 2)");
      if (*m == NonlinearMethod::Exhaustive && B > 12) {
        throw ConfigError("exhaustive search supports at most 12 antennas");
      }
      if (*m == NonlinearMethod::SP && B > 16) {
        throw ConfigError("sphere precoding supports at most 16 antennas");
      }
    }
  }
  if (squid.max_iters < 1 || squid.stable_iters < 1) throw ConfigError("bad SQUID iteration limits");
  if (sdr.randomizations < 0) throw ConfigError("sdr_randomizations must be >= 0");
  if (!(sdr.solver.tol > 0.0) || sdr.solver.max_iter < 1) throw ConfigError("bad SDP solver limits");
  if (sphere.max_outer < 1) throw ConfigError("sp_max_outer must be >= 1");
  if (sweep == SweepKind::Csi) {
    if (csi_eps.empty()) throw ConfigError("CSI sweep needs an eps grid");
    for (const double e : csi_eps) {
      if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("eps must lie in [0, 1]");
    }
  }
  if (sweep == SweepKind::Rate) {
    const long long cells = static_cast<long long>(mi.symbol_bins) * mi.symbol_bins;
    if (mi.symbol_bins < 1 || mi.output_bins < 1 || mi.error_bins < 1) {
      throw ConfigError("histogram bins must be >= 1");
    }
    if (mi_samples < 2 * cells) throw ConfigError("mi_samples too small for the symbol bins");
  }
}

}  // namespace qprecode
