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

#include "qprecode/nonlinear_precoding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace qprecode {

RVec prox_sq_linf(const RVec& z, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("prox_sq_linf: lambda must be positive");
  const Eigen::Index n = z.size();
  if (n == 0) return z;
  std::vector<double> sorted(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) sorted[static_cast<std::size_t>(i)] = std::abs(z(i));
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // Clipping threshold: the largest running average sum_{i<=k} s_i / (2 lambda + k).
  double clip = 0.0;
  double partial = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    partial += sorted[static_cast<std::size_t>(k - 1)];
    clip = std::max(clip, partial / (2.0 * lambda + static_cast<double>(k)));
  }
  RVec u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = std::min(std::abs(z(i)), clip);
    u(i) = z(i) >= 0.0 ? m : -m;
  }
  return u;
}

LeastSquaresProx::LeastSquaresProx(RMat H_R) : H_(std::move(H_R)) {
  RMat inner = H_ * H_.transpose();
  inner.diagonal().array() += 0.5;
  inner_.compute(inner);
  if (inner_.info() != Eigen::Success) {
    throw std::runtime_error("LeastSquaresProx: factorization failed");
  }
}

RVec LeastSquaresProx::project_symbols(const RVec& s_R) const {
  return H_.transpose() * s_R;
}

RVec LeastSquaresProx::apply(const RVec& w, const RVec& HtS) const {
  // (H^T H + I/2)^{-1} v = 2 v - 2 H^T (H H^T + I/2)^{-1} H v.
  const RVec v = HtS + 0.5 * w;
  const RVec t = inner_.solve(H_ * v);
  return 2.0 * (v - H_.transpose() * t);
}

RVec LeastSquaresProx::operator()(const RVec& w, const RVec& s_R) const {
  return apply(w, project_symbols(s_R));
}

SquidPrecoder::SquidPrecoder(const ChannelRealization& ch, double N0, double P,
                             SquidOptions opts)
    : ch_(ch), N0_(N0), P_(P), opts_(opts), prox_g_(realify(ch, CVec::Zero(ch.users())).H) {
  if (!(N0 >= 0.0) || !(P > 0.0)) throw std::invalid_argument("squid: bad N0 or P");
  if (opts_.max_iters < 1) throw std::invalid_argument("squid: max_iters < 1");
}

namespace {

struct SquidRun {
  RVec b;
  int iterations = 0;
  bool converged = false;
};

SquidRun run_squid(const LeastSquaresProx& prox_g, const RVec& HtS,
                          double lambda, const SquidOptions& opts,
                          const std::function<void(const RVec&)>& on_new_signs) {
  const Eigen::Index n = HtS.size();
  RVec b = RVec::Zero(n);
  RVec c = RVec::Zero(n);
  std::vector<bool> signs(static_cast<std::size_t>(n), true);
  SquidRun run;
  int stable = 0;
  while (run.iterations < opts.max_iters) {
    ++run.iterations;
    const RVec a = prox_g.apply(2.0 * b - c, HtS);
    c += a - b;
    // With N0 = 0 the penalty vanishes and its prox is the identity.
    b = lambda > 0.0 ? prox_sq_linf(c, lambda) : c;

    bool same = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pos = b(i) >= 0.0;
      if (pos != signs[static_cast<std::size_t>(i)]) {
        same = false;
        signs[static_cast<std::size_t>(i)] = pos;
      }
    }
    if (!same && on_new_signs) on_new_signs(b);
    stable = same ? stable + 1 : 0;
    if (stable >= opts.stable_iters) {
      run.converged = true;
      break;
    }
  }
  run.b = std::move(b);
  return run;
}

}  // namespace

RVec SquidPrecoder::relaxed_solution(const CVec& s, int* iterations,
                                     bool* converged) const {
  if (s.size() != ch_.users()) throw std::invalid_argument("squid: symbol length mismatch");
  const double lambda = 2.0 * ch_.antennas() * ch_.users() * N0_ / P_;
  const RVec HtS = prox_g_.project_symbols(realify(s));
  const SquidRun run = run_squid(prox_g_, HtS, lambda, opts_, {});
  if (iterations) *iterations = run.iterations;
  if (converged) *converged = run.converged;
  return run.b;
}

PrecodeResult SquidPrecoder::precode(const CVec& s) const {
  if (s.size() != ch_.users()) throw std::invalid_argument("squid: symbol length mismatch");
  const int B = ch_.antennas();
  const CMat& H = ch_.matrix();
  const double lambda = 2.0 * B * ch_.users() * N0_ / P_;
  const RVec HtS = prox_g_.project_symbols(realify(s));

  // Best quantized iterate, reported when the iteration cap is hit.
  CVec best;
  double best_obj = 0.0;
  auto track = [&](const RVec& b) {
    CVec x = sign_quantize_real(b, P_, B);
    const double obj = qp_objective_best_beta(H, s, x, N0_);
    if (best.size() == 0 || obj < best_obj) {
      best_obj = obj;
      best = std::move(x);
    }
  };
  const SquidRun run = run_squid(prox_g_, HtS, lambda, opts_, track);
  CVec x = run.converged || best.size() == 0 ? sign_quantize_real(run.b, P_, B) : best;
  PrecodeResult r = finish_result(H, s, std::move(x), N0_, NonlinearMethod::SQUID);
  r.converged = run.converged;
  r.iterations = run.iterations;
  return r;
}

PrecodeResult squid_precode(const ChannelRealization& ch, const CVec& s,
                            double N0, double P, SquidOptions opts) {
  return SquidPrecoder(ch, N0, P, opts).precode(s);
}

}  // namespace qprecode
