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

#include "qprecode/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "qprecode/bussgang.hpp"
#include "qprecode/errors.hpp"
#include "qprecode/mutual_information.hpp"

namespace qprecode {

using namespace streams;

namespace {

ChannelRealization channel_for(const SimConfig& cfg, int c) {
  Rng rng = Rng::substream(cfg.seed, kChannelStream, static_cast<std::uint64_t>(c));
  return sample_channel(cfg.U, cfg.B, rng);
}

ChannelRealization estimate_for(const SimConfig& cfg, const ChannelRealization& ch, int c,
                                double eps) {
  Rng rng = Rng::substream(cfg.seed, kCsiStream, static_cast<std::uint64_t>(c));
  return corrupt_csi(ch, eps, rng);
}

double noise_level(const SimConfig& cfg, double snr_db) {
  return NoiseModel::from_snr_db(snr_db, cfg.power).N0;
}

struct BerTally {
  long long errors = 0;
  long long bits = 0;
  long long trials = 0;
};

// One BER point with the adaptive budget. Task j covers trials
// [j S, min((j+1) S, T)) on channel j mod C; tasks run in waves of C so
// every wave touches each channel once.
BerTally simulate_ber_point(const SimConfig& cfg, const PrecoderKind& kind, double snr_db,
                            std::optional<double> eps) {
  const double N0 = noise_level(cfg, snr_db);
  const double noise_std = std::sqrt(N0);
  const long long T = cfg.trials_per_point;
  const long long S = cfg.block_trials;
  const int C = cfg.channels_per_point;
  const long long n_tasks = (T + S - 1) / S;
  const Constellation qpsk = Constellation::qpsk();

  BerTally total;
  for (long long wave = 0; wave < n_tasks; wave += C) {
    const long long wave_end = std::min(n_tasks, wave + C);
    std::vector<BerTally> parts(static_cast<std::size_t>(wave_end - wave));
    parallel_for(parts.size(), cfg.threads, [&](std::size_t i) {
      const long long j = wave + static_cast<long long>(i);
      const int c = static_cast<int>(j % C);
      const auto k = static_cast<std::uint64_t>(j / C);
      const long long count = std::min(S, T - j * S);

      const ChannelRealization ch = channel_for(cfg, c);
      const ChannelRealization csi = eps ? estimate_for(cfg, ch, c, *eps) : ch;
      const PrecoderInstance precoder(kind, csi, N0, cfg);
      Rng rng = Rng::substream(cfg.seed, kTrialStream, static_cast<std::uint64_t>(c), k);
      Rng rounding = Rng::substream(cfg.seed, kRoundingStream, static_cast<std::uint64_t>(c), k);

      BerTally& part = parts[i];
      CVec noise(cfg.U);
      for (long long t = 0; t < count; ++t) {
        const CVec s = sample_symbols(qpsk, cfg.U, rng);
        for (int u = 0; u < cfg.U; ++u) noise(u) = rng.complex_normal() * noise_std;
        const CVec y = apply_channel(ch, precoder(s, rounding), noise);
        part.errors += count_bit_errors(s, y);
        part.bits += 2LL * cfg.U;
        ++part.trials;
      }
    });
    for (const BerTally& p : parts) {
      total.errors += p.errors;
      total.bits += p.bits;
      total.trials += p.trials;
    }
    if (cfg.min_errors > 0 && total.errors >= cfg.min_errors) break;
  }
  return total;
}

ResultRow ber_row(const SimConfig& cfg, const PrecoderKind& kind, double snr_db,
                  std::optional<double> eps, const BerTally& tally) {
  ResultRow row;
  row.precoder = precoder_tag(kind);
  row.B = cfg.B;
  row.U = cfg.U;
  row.levels = cfg.levels;
  row.snr_db = snr_db;
  row.eps = eps;
  row.metric = MetricKind::BER;
  const double p = static_cast<double>(tally.errors) / static_cast<double>(tally.bits);
  row.value = p;
  row.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(tally.bits));
  row.trials = tally.trials;
  return row;
}

ResultRow base_row(const SimConfig& cfg, const PrecoderKind& kind, double snr_db, MetricKind m) {
  ResultRow row;
  row.precoder = precoder_tag(kind);
  row.B = cfg.B;
  row.U = cfg.U;
  row.levels = cfg.levels;
  row.snr_db = snr_db;
  row.metric = m;
  return row;
}

// Large-system SINDR of a linear precoder with the configured DAC.
double asymptotic_point_sindr(const SimConfig& cfg, LinearKind kind, double snr_db) {
  const double rho = cfg.power / noise_level(cfg, snr_db);
  const double gain = asymptotic_gain_optimized(cfg.levels, cfg.B, cfg.power);
  return asymptotic_sindr(kind, effective_snr(gain, rho), cfg.B, cfg.U);
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double std_error_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (const double x : v) ss += (x - m) * (x - m);
  const double n = static_cast<double>(v.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

PrecoderInstance::PrecoderInstance(const PrecoderKind& kind, const ChannelRealization& csi,
                                   double N0, const SimConfig& cfg)
    : kind_(kind), csi_(csi), N0_(N0), P_(cfg.power), levels_(cfg.levels), sdr_(cfg.sdr),
      sphere_(cfg.sphere) {
  if (const auto* lk = std::get_if<LinearKind>(&kind_)) {
    linear_ = make_linear_precoder(*lk, csi_, N0_, P_);
    if (levels_ > 2) quantizer_ = make_power_normalized_quantizer(levels_, csi_.antennas(), P_);
    return;
  }
  switch (std::get<NonlinearMethod>(kind_)) {
    case NonlinearMethod::SQUID:
      squid_.emplace(csi_, N0_, P_, cfg.squid);
      break;
    case NonlinearMethod::SDR1:
      sdr_.extraction = SdrExtraction::Rank1;
      break;
    case NonlinearMethod::SDRr:
      sdr_.extraction = SdrExtraction::Randomized;
      break;
    default:
      break;
  }
}

CVec PrecoderInstance::operator()(const CVec& s, Rng& rng) const {
  if (std::holds_alternative<LinearKind>(kind_)) {
    const CVec z = linear_.matrix * s;
    if (levels_ == 0) return z;
    // The 1-bit path uses the sign quantizer so ||x||^2 = P holds exactly.
    if (levels_ == 2) return quantize_one_bit(z, P_, csi_.antennas());
    return quantize(quantizer_, z);
  }
  switch (std::get<NonlinearMethod>(kind_)) {
    case NonlinearMethod::Exhaustive:
      return exhaustive_qp(csi_, s, N0_, P_).x;
    case NonlinearMethod::SDR1:
    case NonlinearMethod::SDRr:
      return sdr_precode(csi_, s, N0_, P_, sdr_, &rng).result.x;
    case NonlinearMethod::SQUID:
      return squid_->precode(s).x;
    case NonlinearMethod::SP:
      return sphere_precode(csi_, s, N0_, P_, sphere_).x;
  }
  throw std::logic_error("PrecoderInstance: unknown method");
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

long long count_bit_errors(const CVec& s, const CVec& y) {
  if (s.size() != y.size()) throw std::invalid_argument("count_bit_errors: length mismatch");
  long long errors = 0;
  for (Eigen::Index u = 0; u < s.size(); ++u) {
    errors += (s(u).real() >= 0.0) != (y(u).real() >= 0.0);
    errors += (s(u).imag() >= 0.0) != (y(u).imag() >= 0.0);
  }
  return errors;
}

std::vector<ResultRow> run_ber_sweep(const SimConfig& cfg) {
  cfg.validate(SweepKind::Ber);
  std::vector<ResultRow> rows;
  for (const auto& kind : cfg.precoders) {
    for (const double snr : cfg.snr_db) {
      rows.push_back(ber_row(cfg, kind, snr, std::nullopt,
                             simulate_ber_point(cfg, kind, snr, std::nullopt)));
    }
  }
  return rows;
}

std::vector<ResultRow> run_csi_sweep(const SimConfig& cfg) {
  cfg.validate(SweepKind::Csi);
  std::vector<ResultRow> rows;
  for (const auto& kind : cfg.precoders) {
    for (const double eps : cfg.csi_eps) {
      for (const double snr : cfg.snr_db) {
        rows.push_back(ber_row(cfg, kind, snr, eps, simulate_ber_point(cfg, kind, snr, eps)));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_rate_sweep(const SimConfig& cfg) {
  cfg.validate(SweepKind::Rate);
  if (cfg.channels_per_point < 2) {
    throw ConfigError("rate sweep needs at least 2 channels for its error estimate");
  }
  const int C = cfg.channels_per_point;
  const int U = cfg.U;
  const long long N = cfg.mi_samples;
  const Constellation gaussian = Constellation::gaussian();
  std::vector<ResultRow> rows;
  for (const auto& kind : cfg.precoders) {
    const auto* lk = std::get_if<LinearKind>(&kind);
    const bool has_bound = lk != nullptr && cfg.levels == 2;
    for (const double snr : cfg.snr_db) {
      const double N0 = noise_level(cfg, snr);
      const double noise_std = std::sqrt(N0);
      std::vector<double> sum_rate(static_cast<std::size_t>(C));
      std::vector<double> bound(static_cast<std::size_t>(C));
      parallel_for(static_cast<std::size_t>(C), cfg.threads, [&](std::size_t i) {
        const int c = static_cast<int>(i);
        const ChannelRealization ch = channel_for(cfg, c);
        const PrecoderInstance precoder(kind, ch, N0, cfg);
        Rng rng = Rng::substream(cfg.seed, kRateStream, static_cast<std::uint64_t>(c));
        Rng rounding = Rng::substream(cfg.seed, kRoundingStream, static_cast<std::uint64_t>(c),
                                      ~std::uint64_t{0});
        std::vector<std::vector<cd>> sent(static_cast<std::size_t>(U));
        std::vector<std::vector<cd>> received(static_cast<std::size_t>(U));
        for (auto& v : sent) v.reserve(static_cast<std::size_t>(N));
        for (auto& v : received) v.reserve(static_cast<std::size_t>(N));
        CVec noise(U);
        for (long long t = 0; t < N; ++t) {
          const CVec s = sample_symbols(gaussian, U, rng);
          for (int u = 0; u < U; ++u) noise(u) = rng.complex_normal() * noise_std;
          const CVec y = apply_channel(ch, precoder(s, rounding), noise);
          for (int u = 0; u < U; ++u) {
            sent[static_cast<std::size_t>(u)].push_back(s(u));
            received[static_cast<std::size_t>(u)].push_back(y(u));
          }
        }
        double total = 0.0;
        for (int u = 0; u < U; ++u) {
          total += histogram_mutual_information(sent[static_cast<std::size_t>(u)],
                                                received[static_cast<std::size_t>(u)], cfg.mi);
        }
        sum_rate[i] = total;
        if (has_bound) {
          const LinearPrecoder lp = make_linear_precoder(*lk, ch, N0, cfg.power);
          bound[i] = rate_lower_bound_one_bit(ch, lp, cfg.power, N0).sum();
        }
      });

      ResultRow sum = base_row(cfg, kind, snr, MetricKind::SumRate);
      sum.value = mean_of(sum_rate);
      sum.std_error = std_error_of(sum_rate);
      sum.trials = static_cast<long long>(C) * N;
      ResultRow per_user = sum;
      per_user.metric = MetricKind::PerUserRate;
      per_user.value /= U;
      per_user.std_error /= U;
      rows.push_back(sum);
      rows.push_back(per_user);
      if (has_bound) {
        ResultRow lb = base_row(cfg, kind, snr, MetricKind::RateLB);
        lb.value = mean_of(bound);
        lb.std_error = std_error_of(bound);
        lb.trials = C;
        rows.push_back(lb);
      }
      if (lk != nullptr) {
        ResultRow analytic = base_row(cfg, kind, snr, MetricKind::AnalyticRate);
        analytic.value = U * std::log2(1.0 + asymptotic_point_sindr(cfg, *lk, snr));
        rows.push_back(analytic);
      }
    }
  }
  return rows;
}

std::vector<ResultRow> analytic_curves(const SimConfig& cfg) {
  cfg.validate(SweepKind::Analytic);
  std::vector<ResultRow> rows;
  for (const auto& kind : cfg.precoders) {
    const LinearKind lk = std::get<LinearKind>(kind);
    for (const double snr : cfg.snr_db) {
      const double gamma = asymptotic_point_sindr(cfg, lk, snr);
      ResultRow ber = base_row(cfg, kind, snr, MetricKind::AnalyticBER);
      ber.value = ber_approximation(gamma);
      rows.push_back(ber);
      ResultRow rate = base_row(cfg, kind, snr, MetricKind::AnalyticRate);
      rate.value = cfg.U * std::log2(1.0 + gamma);
      rows.push_back(rate);
    }
  }
  return rows;
}

std::vector<ResultRow> run_sweep(SweepKind kind, const SimConfig& cfg) {
  switch (kind) {
    case SweepKind::Ber:
      return run_ber_sweep(cfg);
    case SweepKind::Rate:
      return run_rate_sweep(cfg);
    case SweepKind::Csi:
      return run_csi_sweep(cfg);
    case SweepKind::Analytic:
      return analytic_curves(cfg);
  }
  throw std::logic_error("run_sweep: unknown sweep");
}

}  // namespace qprecode
