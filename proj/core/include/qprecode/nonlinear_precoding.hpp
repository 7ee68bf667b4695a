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

#include <optional>
#include <string_view>

#include "qprecode/channel.hpp"
#include "qprecode/rng.hpp"
#include "qprecode/sdp_solver.hpp"
#include "qprecode/types.hpp"

// 1-bit nonlinear precoders. All of them search the alphabet
// X = sqrt(P/(2B)) {+-1 +-j} for a vector x minimizing
//   ||s - beta H x||^2 + beta^2 U N0,   beta > 0.

namespace qprecode {

enum class NonlinearMethod { Exhaustive, SDR1, SDRr, SQUID, SP };

std::string_view to_string(NonlinearMethod m);

struct PrecodeResult {
  CVec x;
  double beta = 0.0;
  double objective = 0.0;
  NonlinearMethod method = NonlinearMethod::Exhaustive;
  bool converged = true;
  int iterations = 0;
};

/// Real-valued embedding: H_R = [[Re H, -Im H], [Im H, Re H]],
/// s_R = [Re s; Im s].
struct RealEmbedding {
  RMat H;
  RVec s;
};

RealEmbedding realify(const ChannelRealization& ch, const CVec& s);
RVec realify(const CVec& v);
CVec complexify(const RVec& v);

/// Amplitude of each real component of a 1-bit output, sqrt(P/(2B)).
double one_bit_amplitude(double P, int B);

/// Re{s^H H x} / (||Hx||^2 + U N0). May be <= 0.
double optimal_beta(const CMat& H, const CVec& s, const CVec& x, double N0);

double qp_objective(const CMat& H, const CVec& s, const CVec& x, double beta,
                    double N0);

/// Objective minimized over beta > 0:
/// ||s||^2 - Re{s^H H x}^2 / (||Hx||^2 + U N0) when Re{s^H H x} > 0,
/// otherwise ||s||^2 (the beta -> 0+ limit).
double qp_objective_best_beta(const CMat& H, const CVec& s, const CVec& x,
                              double N0);

/// Lifted matrix T_R of size (2B+1) x (2B+1).
RMat lifted_matrix(const RealEmbedding& emb, double N0, double P);

/// Maps x_R (2B entries) to sqrt(P/(2B)) sgn(.) and complexifies.
CVec sign_quantize_real(const RVec& v, double P, int B);

/// Completes a PrecodeResult from a candidate x: flips x -> -x when
/// Re{s^H H x} < 0, then fills beta and objective.
PrecodeResult finish_result(const CMat& H, const CVec& s, CVec x, double N0,
                            NonlinearMethod method);

/// Global optimum by enumeration. Only 4^(B-1) candidates are visited: the
/// objective at the best beta is invariant within the orbit {x, jx, -x, -jx}
/// up to the choice of rotation. Throws ConfigError when B > 12.
PrecodeResult exhaustive_qp(const ChannelRealization& ch, const CVec& s,
                            double N0, double P);

enum class SdrExtraction { Rank1, Randomized };

struct SdrOptions {
  SdrExtraction extraction = SdrExtraction::Rank1;
  int randomizations = 100;
  SdpOptions solver{};
};

struct SdrResult {
  PrecodeResult result;
  SdpSolution sdp;
};

/// Semidefinite relaxation. Randomized extraction draws from rng.
SdrResult sdr_precode(const ChannelRealization& ch, const CVec& s, double N0,
                      double P, const SdrOptions& opts, Rng* rng = nullptr);

/// Minimizer of lambda ||u||_inf^2 + 1/2 ||z - u||^2.
RVec prox_sq_linf(const RVec& z, double lambda);

/// prox of g(b) = ||s_R - H_R b||^2, i.e. (H_R^T H_R + I/2)^{-1}
/// (H_R^T s_R + w/2). The factorization is formed once per channel via the
/// Woodbury identity and shared read-only afterwards.
class LeastSquaresProx {
 public:
  explicit LeastSquaresProx(RMat H_R);

  const RMat& channel() const { return H_; }
  /// Returns the prox for symbol vector s_R evaluated at w.
  RVec operator()(const RVec& w, const RVec& s_R) const;
  /// H_R^T s_R, exposed so callers can precompute it per symbol vector.
  RVec project_symbols(const RVec& s_R) const;
  /// Prox given a precomputed H_R^T s_R.
  RVec apply(const RVec& w, const RVec& HtS) const;

 private:
  RMat H_;
  Eigen::LLT<RMat> inner_;  // H_R H_R^T + I/2, size 2U
};

struct SquidOptions {
  int max_iters = 200;
  // Early exit once the sign pattern of b is unchanged this many times.
  int stable_iters = 10;
};

/// Squared-infinity-norm Douglas-Rachford splitting. Construct once per
/// channel; precode() is const and thread-safe.
class SquidPrecoder {
 public:
  SquidPrecoder(const ChannelRealization& ch, double N0, double P,
                SquidOptions opts = {});

  PrecodeResult precode(const CVec& s) const;
  /// Relaxed real-valued iterate b_R at exit for symbol vector s.
  RVec relaxed_solution(const CVec& s, int* iterations = nullptr,
                        bool* converged = nullptr) const;

 private:
  ChannelRealization ch_;
  double N0_;
  double P_;
  SquidOptions opts_;
  LeastSquaresProx prox_g_;
};

PrecodeResult squid_precode(const ChannelRealization& ch, const CVec& s,
                            double N0, double P, SquidOptions opts = {});

/// Fixed-beta sphere search: argmin over x in X^B of ||y - beta R x||^2 for
/// upper-triangular R with real non-negative diagonal. radius_sq bounds the
/// initial search; returns nullopt if no point lies inside it.
struct SphereSearchResult {
  CVec x;
  double metric = 0.0;
  long long nodes = 0;
};
std::optional<SphereSearchResult> sphere_search(const CMat& R, const CVec& y,
                                                double beta, double amplitude,
                                                double radius_sq);

struct SphereOptions {
  int max_outer = 3;
};

/// Sphere precoding: alternates the fixed-beta search on the augmented
/// system [H; sqrt(U N0/P) I] with beta updates, starting from the beta of
/// the 1-bit quantized Wiener-filter output. Throws ConfigError when
/// B > 16.
PrecodeResult sphere_precode(const ChannelRealization& ch, const CVec& s,
                             double N0, double P, SphereOptions opts = {});

/// Augmented system used by sphere precoding: QR of [H; sqrt(U N0/P) I].
struct SphereSystem {
  CMat Q;  // (U+B) x B, orthonormal columns
  CMat R;  // B x B upper triangular, real non-negative diagonal
};
SphereSystem sphere_system(const ChannelRealization& ch, double N0, double P);

}  // namespace qprecode
