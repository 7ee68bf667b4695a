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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/QR>

#include "qprecode/errors.hpp"
#include "qprecode/linear_precoding.hpp"
#include "qprecode/nonlinear_precoding.hpp"
#include "qprecode/quantizer.hpp"

namespace qprecode {

SphereSystem sphere_system(const ChannelRealization& ch, double N0, double P) {
  if (!(N0 >= 0.0) || !(P > 0.0)) throw std::invalid_argument("sphere_system: bad N0 or P");
  const int U = ch.users();
  const int B = ch.antennas();
  CMat Hbar(U + B, B);
  Hbar.topRows(U) = ch.matrix();
  Hbar.bottomRows(B) = CMat::Identity(B, B) * std::sqrt(U * N0 / P);

  const Eigen::HouseholderQR<CMat> qr(Hbar);
  SphereSystem sys;
  sys.R = qr.matrixQR().topRows(B).triangularView<Eigen::Upper>();
  sys.Q = qr.householderQ() * CMat::Identity(U + B, B);
  // Rotate each row of R so its diagonal entry is real and non-negative;
  // the matching column of Q absorbs the conjugate phase.
  for (int k = 0; k < B; ++k) {
    const double mag = std::abs(sys.R(k, k));
    if (mag == 0.0) continue;
    const cd phase = sys.R(k, k) / mag;
    sys.R.row(k) *= std::conj(phase);
    sys.Q.col(k) *= phase;
    sys.R(k, k) = mag;
  }
  return sys;
}

namespace {

// Depth-first Schnorr-Euchner enumeration over the 4 symbols per antenna.
class SphereSearcher {
 public:
  SphereSearcher(const CMat& R, const CVec& y, double beta, double amplitude,
                 double radius_sq)
      : R_(R), y_(y), beta_(beta), a_(amplitude), best_metric_(radius_sq),
        B_(static_cast<int>(R.rows())), x_(CVec::Zero(B_)) {}

  std::optional<SphereSearchResult> run() {
    descend(B_ - 1, 0.0);
    if (!found_) return std::nullopt;
    return SphereSearchResult{best_x_, best_metric_, nodes_};
  }

 private:
  void descend(int k, double partial) {
    if (k < 0) {
      best_metric_ = partial;
      best_x_ = x_;
      found_ = true;
      return;
    }
    cd e = y_(k);
    for (int j = k + 1; j < B_; ++j) e -= beta_ * R_(k, j) * x_(j);
    const double r = beta_ * R_(k, k).real() * a_;

    // Real and imaginary signs decouple because R(k,k) is real.
    const double re_pos = sq(e.real() - r);
    const double re_neg = sq(e.real() + r);
    const double im_pos = sq(e.imag() - r);
    const double im_neg = sq(e.imag() + r);
    std::array<std::pair<double, cd>, 4> children{{
        {re_pos + im_pos, cd(a_, a_)},
        {re_pos + im_neg, cd(a_, -a_)},
        {re_neg + im_pos, cd(-a_, a_)},
        {re_neg + im_neg, cd(-a_, -a_)},
    }};
    std::stable_sort(children.begin(), children.end(),
                     [](const auto& l, const auto& r2) { return l.first < r2.first; });
    for (const auto& [inc, sym] : children) {
      const double m = partial + inc;
      // Children are sorted, so the remaining ones cannot do better either.
      if (m >= best_metric_) break;
      ++nodes_;
      x_(k) = sym;
      descend(k - 1, m);
    }
  }

  static double sq(double v) { return v * v; }

  const CMat& R_;
  const CVec& y_;
  double beta_;
  double a_;
  double best_metric_;
  int B_;
  CVec x_;
  CVec best_x_;
  bool found_ = false;
  long long nodes_ = 0;
};

double sphere_metric(const SphereSystem& sys, const CVec& y, double beta, const CVec& x) {
  return (y - beta * (sys.R * x)).squaredNorm();
}

}  // namespace

std::optional<SphereSearchResult> sphere_search(const CMat& R, const CVec& y,
                                                double beta, double amplitude,
                                                double radius_sq) {
  if (R.rows() != R.cols() || R.rows() != y.size() || R.rows() == 0) {
    throw std::invalid_argument("sphere_search: dimension mismatch");
  }
  if (!(amplitude > 0.0)) throw std::invalid_argument("sphere_search: amplitude must be positive");
  return SphereSearcher(R, y, beta, amplitude, radius_sq).run();
}

PrecodeResult sphere_precode(const ChannelRealization& ch, const CVec& s,
                             double N0, double P, SphereOptions opts) {
  const int U = ch.users();
  const int B = ch.antennas();
  if (B > 16) throw ConfigError("sphere precoding supports at most 16 antennas");
  if (s.size() != U) throw std::invalid_argument("sphere_precode: symbol length mismatch");
  if (opts.max_outer < 1) throw std::invalid_argument("sphere_precode: max_outer < 1");
  const CMat& H = ch.matrix();
  const double a = one_bit_amplitude(P, B);

  const SphereSystem sys = sphere_system(ch, N0, P);
  const CVec y = sys.Q.topRows(U).adjoint() * s;

  // Start from the 1-bit quantized Wiener-filter output.
  const LinearPrecoder wf = wf_precoder(ch, N0, P);
  CVec x = quantize_one_bit(wf.matrix * s, P, B);
  if (s.dot(H * x).real() < 0.0) x = -x;
  double beta = optimal_beta(H, s, x, N0);

  CVec best_x = x;
  double best_obj = qp_objective_best_beta(H, s, x, N0);
  int outer = 0;
  while (outer < opts.max_outer && beta > 0.0) {
    ++outer;
    // Radius slightly above the incumbent so rounding cannot exclude it.
    const double incumbent = sphere_metric(sys, y, beta, x);
    const double radius = incumbent * (1.0 + 1e-12) + 1e-300;
    const auto found = sphere_search(sys.R, y, beta, a, radius);
    const CVec next = found ? found->x : x;
    const double obj = qp_objective_best_beta(H, s, next, N0);
    if (obj < best_obj) {
      best_obj = obj;
      best_x = next;
    }
    if (next == x) break;
    x = next;
    beta = optimal_beta(H, s, x, N0);
  }
  PrecodeResult r = finish_result(H, s, best_x, N0, NonlinearMethod::SP);
  r.iterations = outer;
  return r;
}

}  // namespace qprecode
