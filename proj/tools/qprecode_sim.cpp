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

// Command-line front end for the Monte-Carlo sweeps.
//
//   qprecode_sim ber --b 128 --u 16 --levels 2 --snr -10:2:10
//       --precoders WF,ZF,SQUID --trials 20000 --out ber.csv

#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qprecode/csv.hpp"
#include "qprecode/errors.hpp"
#include "qprecode/harness.hpp"
#include "qprecode/sim_config.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  // Raw flag values keyed by config key; only flags given on the command
  // line are applied.
  std::map<std::string, std::string> values;
};

void add_sweep_flags(CLI::App* cmd, Flags& flags, bool with_eps) {
  const std::vector<std::pair<std::string, std::string>> options = {
      {"b", "Number of base-station antennas B"},
      {"u", "Number of users U"},
      {"levels", "DAC levels per real dimension (integer >= 2 or inf)"},
      {"snr", "SNR grid in dB: comma list or start:step:stop"},
      {"precoders", "Comma list of WF, ZF, MRT, Exhaustive, SDR1, SDRr, SQUID, SP"},
      {"trials", "Symbol-vector trials per point (cap for the adaptive budget)"},
      {"channels", "Channel realizations per point"},
      {"seed", "Master random seed"},
      {"threads", "Worker threads"},
  };
  for (const auto& [name, help] : options) {
    cmd->add_option("--" + name, flags.values[name], help);
  }
  if (with_eps) cmd->add_option("--eps", flags.values["eps"], "CSI error grid (comma list or range)");
  cmd->add_option("--config", flags.config_path, "Flat key = value config file");
  cmd->add_option("--set", flags.overrides, "Extra config entry key=value (repeatable)");
  cmd->add_option("--out", flags.out_path, "Output CSV path (stdout when omitted)");
}

qprecode::SimConfig build_config(CLI::App* cmd, const Flags& flags) {
  std::map<std::string, std::string> entries;
  if (!flags.config_path.empty()) entries = qprecode::load_config_file(flags.config_path);
  for (const auto& [name, value] : flags.values) {
    if (cmd->count("--" + name) > 0) entries[name] = value;
  }
  for (const std::string& kv : flags.overrides) {
    const auto parsed = qprecode::parse_config_text(kv);
    if (parsed.size() != 1) throw qprecode::ConfigError("--set expects key=value, got '" + kv + "'");
    entries.insert_or_assign(parsed.begin()->first, parsed.begin()->second);
  }
  qprecode::SimConfig cfg;
  cfg.snr_db = {0.0};
  cfg.precoders = {qprecode::LinearKind::WF};
  qprecode::apply_config(cfg, entries);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized downlink precoding simulator"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    qprecode::SweepKind kind;
    bool with_eps;
  };
  const std::vector<Sub> subs = {
      {"ber", "Uncoded BER versus SNR (QPSK)", qprecode::SweepKind::Ber, false},
      {"rate", "Achievable rate versus SNR (Gaussian symbols)", qprecode::SweepKind::Rate, false},
      {"csi", "BER versus channel-estimation error", qprecode::SweepKind::Csi, true},
      {"analytic", "Large-system closed-form BER and rate curves", qprecode::SweepKind::Analytic,
       false},
  };
  std::vector<Flags> flags(subs.size());
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_sweep_flags(cmd, flags[i], subs[i].with_eps);
    cmds.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!cmds[i]->parsed()) continue;
    try {
      const qprecode::SimConfig cfg = build_config(cmds[i], flags[i]);
      const auto rows = qprecode::run_sweep(subs[i].kind, cfg);
      if (flags[i].out_path.empty()) {
        std::cout << qprecode::format_csv(rows);
      } else {
        qprecode::write_csv(rows, flags[i].out_path);
      }
    } catch (const qprecode::ConfigError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}
