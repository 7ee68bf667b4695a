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

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "qprecode/errors.hpp"

namespace qprecode {

std::string_view to_string(NonlinearMethod m) {
  switch (m) {
    case NonlinearMethod::Exhaustive: return "Exhaustive";
    case NonlinearMethod::SDR1: return "SDR1";
    case NonlinearMethod::SDRr: return "SDRr";
    case NonlinearMethod::SQUID: return "SQUID";
    case NonlinearMethod::SP: return "SP";
  }
  return "?";
}

RVec realify(const CVec& v) {
  RVec out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

CVec complexify(const RVec& v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("complexify: odd length");
  const Eigen::Index n = v.size() / 2;
  CVec out(n);
  for (Eigen::Index b = 0; b < n; ++b) out(b) = cd(v(b), v(n + b));
  return out;
}

RealEmbedding realify(const ChannelRealization& ch, const CVec& s) {
  const CMat& H = ch.matrix();
  const Eigen::Index U = H.rows();
  const Eigen::Index B = H.cols();
  if (s.size() != U) throw std::invalid_argument("realify: symbol length mismatch");
  RealEmbedding e;
  e.H.resize(2 * U, 2 * B);
  e.H.topLeftCorner(U, B) = H.real();
  e.H.topRightCorner(U, B) = -H.imag();
  e.H.bottomLeftCorner(U, B) = H.imag();
  e.H.bottomRightCorner(U, B) = H.real();
  e.s = realify(s);
  return e;
}

double one_bit_amplitude(double P, int B) { return std::sqrt(P / (2.0 * B)); }

double optimal_beta(const CMat& H, const CVec& s, const CVec& x, double N0) {
  const CVec Hx = H * x;
  const double num = s.dot(Hx).real();  // Eigen's dot conjugates the left side
  const double den = Hx.squaredNorm() + static_cast<double>(H.rows()) * N0;
  if (!(den > 0.0)) throw std::invalid_argument("optimal_beta: zero x with N0 = 0");
  return num / den;
}

double qp_objective(const CMat& H, const CVec& s, const CVec& x, double beta,
                    double N0) {
  return (s - beta * (H * x)).squaredNorm() +
         beta * beta * static_cast<double>(H.rows()) * N0;
}

double qp_objective_best_beta(const CMat& H, const CVec& s, const CVec& x,
                              double N0) {
  const CVec Hx = H * x;
  const double num = s.dot(Hx).real();
  const double den = Hx.squaredNorm() + static_cast<double>(H.rows()) * N0;
  const double s2 = s.squaredNorm();
  if (!(num > 0.0)) return s2;
  return s2 - num * num / den;
}

RMat lifted_matrix(const RealEmbedding& emb, double N0, double P) {
  const Eigen::Index n2 = emb.H.cols();
  const double load = static_cast<double>(emb.H.rows() / 2) * N0 / P;
  RMat T(n2 + 1, n2 + 1);
  T.topLeftCorner(n2, n2) = emb.H.transpose() * emb.H;
  T.topLeftCorner(n2, n2).diagonal().array() += load;
  const RVec Hts = emb.H.transpose() * emb.s;
  T.topRightCorner(n2, 1) = -Hts;
  T.bottomLeftCorner(1, n2) = -Hts.transpose();
  T(n2, n2) = emb.s.squaredNorm();
  return T;
}

CVec sign_quantize_real(const RVec& v, double P, int B) {
  if (v.size() != 2 * B) throw std::invalid_argument("sign_quantize_real: length mismatch");
  const double a = one_bit_amplitude(P, B);
  CVec x(B);
  for (int b = 0; b < B; ++b) {
    x(b) = cd(v(b) >= 0.0 ? a : -a, v(B + b) >= 0.0 ? a : -a);
  }
  return x;
}

PrecodeResult finish_result(const CMat& H, const CVec& s, CVec x, double N0,
                            NonlinearMethod method) {
  if (s.dot(H * x).real() < 0.0) x = -x;
  PrecodeResult r;
  r.beta = optimal_beta(H, s, x, N0);
  r.objective = qp_objective_best_beta(H, s, x, N0);
  r.x = std::move(x);
  r.method = method;
  return r;
}

namespace {

// Sign bits of a 1-bit vector, antenna 0 real part most significant; a set
// bit marks a negative component. Used only to break exact ties.
std::uint64_t lexicographic_key(const CVec& x) {
  std::uint64_t key = 0;
  for (Eigen::Index b = 0; b < x.size(); ++b) {
    key = (key << 1) | (x(b).real() < 0.0 ? 1u : 0u);
    key = (key << 1) | (x(b).imag() < 0.0 ? 1u : 0u);
  }
  return key;
}

CVec candidate_from_state(std::uint64_t state, int B, double a, cd rotation) {
  CVec x(B);
  x(0) = cd(a, a);
  for (int b = 1; b < B; ++b) {
    const int i = 2 * (b - 1);
    const double re = (state >> i) & 1u ? -a : a;
    const double im = (state >> (i + 1)) & 1u ? -a : a;
    x(b) = cd(re, im);
  }
  return rotation * x;
}

}  // namespace

PrecodeResult exhaustive_qp(const ChannelRealization& ch, const CVec& s,
                            double N0, double P) {
  const int B = ch.antennas();
  const int U = ch.users();
  if (B > 12) {
    throw ConfigError("exhaustive_qp: B = " + std::to_string(B) +
                      " exceeds the 4^B enumeration cap (B <= 12)");
  }
  if (s.size() != U) throw std::invalid_argument("exhaustive_qp: symbol length mismatch");
  const CMat& H = ch.matrix();
  const double a = one_bit_amplitude(P, B);
  const double load = U * N0;

  // Orbit representatives: x_0 fixed to a(1+j), the other antennas free.
  // Gray-code order flips one real component per step.
  const Eigen::RowVectorXcd w = s.adjoint() * H;  // w_b = s^H h_b
  CVec v = CVec::Zero(U);
  for (int b = 0; b < B; ++b) v += H.col(b) * cd(a, a);
  cd c = s.dot(v);

  const int nbits = 2 * (B - 1);
  const std::uint64_t count = std::uint64_t{1} << nbits;
  std::uint64_t state = 0;
  double best_score = -1.0;
  std::uint64_t best_state = 0;
  cd best_rotation(1.0, 0.0);
  std::uint64_t best_key = 0;

  auto consider = [&](std::uint64_t st) {
    const double den = v.squaredNorm() + load;
    // Rotation k in {1, j, -1, -j} gives Re{k c}; pick the largest.
    const double cand[4] = {c.real(), -c.imag(), -c.real(), c.imag()};
    static const cd rot[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    int k = 0;
    for (int i = 1; i < 4; ++i) {
      if (cand[i] > cand[k]) k = i;
    }
    const double m = cand[k];
    const double score = m > 0.0 ? m * m / den : 0.0;
    if (score > best_score) {
      best_score = score;
      best_state = st;
      best_rotation = rot[k];
      best_key = lexicographic_key(candidate_from_state(st, B, a, rot[k]));
    } else if (score == best_score) {
      const std::uint64_t key = lexicographic_key(candidate_from_state(st, B, a, rot[k]));
      if (key < best_key) {
        best_state = st;
        best_rotation = rot[k];
        best_key = key;
      }
    }
  };

  consider(state);
  for (std::uint64_t t = 1; t < count; ++t) {
    const int bit = std::countr_zero(t);
    state ^= std::uint64_t{1} << bit;
    const int b = 1 + bit / 2;
    const bool negative = (state >> bit) & 1u;
    const double step = negative ? -2.0 * a : 2.0 * a;
    const cd delta = bit % 2 == 0 ? cd(step, 0.0) : cd(0.0, step);
    v += H.col(b) * delta;
    c += w(b) * delta;
    consider(state);
  }

  CVec x = candidate_from_state(best_state, B, a, best_rotation);
  PrecodeResult r;
  r.beta = optimal_beta(H, s, x, N0);
  r.objective = qp_objective_best_beta(H, s, x, N0);
  r.x = std::move(x);
  r.method = NonlinearMethod::Exhaustive;
  r.iterations = static_cast<int>(count);
  return r;
}

SdrResult sdr_precode(const ChannelRealization& ch, const CVec& s, double N0,
                      double P, const SdrOptions& opts, Rng* rng) {
  const int B = ch.antennas();
  const CMat& H = ch.matrix();
  const RealEmbedding emb = realify(ch, s);
  SdrResult out;
  out.sdp = solve_diag_constrained_sdp(lifted_matrix(emb, N0, P), opts.solver);

  const Eigen::Index n = 2 * B + 1;
  Eigen::SelfAdjointEigenSolver<RMat> eig(out.sdp.X);
  const RVec u = eig.eigenvectors().col(n - 1);  // ascending order
  const double psi = u(n - 1) >= 0.0 ? 1.0 : -1.0;
  CVec best = sign_quantize_real(psi * u.head(2 * B), P, B);

  NonlinearMethod method = NonlinearMethod::SDR1;
  if (opts.extraction == SdrExtraction::Randomized) {
    if (rng == nullptr) throw std::invalid_argument("sdr_precode: randomized extraction needs an Rng");
    if (opts.randomizations < 1) throw std::invalid_argument("sdr_precode: randomizations < 1");
    method = NonlinearMethod::SDRr;
    const RMat factor =
        eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    double best_obj = qp_objective_best_beta(H, s, best, N0);
    RVec g(n);
    for (int k = 0; k < opts.randomizations; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) g(i) = rng->normal();
      const RVec xi = factor * g;
      const double sgn = xi(n - 1) >= 0.0 ? 1.0 : -1.0;
      CVec cand = sign_quantize_real(sgn * xi.head(2 * B), P, B);
      const double obj = qp_objective_best_beta(H, s, cand, N0);
      if (obj < best_obj) {
        best_obj = obj;
        best = std::move(cand);
      }
    }
  }
  out.result = finish_result(H, s, std::move(best), N0, method);
  out.result.converged = out.sdp.converged;
  out.result.iterations = out.sdp.iterations;
  return out;
}

}  // namespace qprecode
