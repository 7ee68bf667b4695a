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

#include "qprecode/bussgang.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qprecode/errors.hpp"
#include "qprecode/numerics.hpp"

namespace qprecode {

namespace {

RVec row_powers(const CMat& precoder) {
  RVec d = precoder.rowwise().squaredNorm();
  if (d.size() == 0 || !(d.minCoeff() > 0.0)) {
    throw DegenerateError("precoder has a row with zero power");
  }
  return d;
}

double clipped_asin(double v) {
  // Normalized correlations may exceed 1 by rounding.
  constexpr double kSlack = 1e-12;
  if (v > 1.0 + kSlack || v < -1.0 - kSlack) {
    throw std::domain_error("arcsine law: correlation outside [-1, 1]");
  }
  return std::asin(std::clamp(v, -1.0, 1.0));
}

}  // namespace

RVec bussgang_gain(const CMat& precoder, const QuantizerSpec& spec) {
  const RVec sigma2 = row_powers(precoder);
  const int L = spec.levels;
  const double ad = spec.alpha * spec.delta;
  RVec g(sigma2.size());
  for (Eigen::Index b = 0; b < sigma2.size(); ++b) {
    double sum = 0.0;
    for (int i = 1; i < L; ++i) {
      const double t = i - L / 2.0;
      sum += std::exp(-spec.delta * spec.delta * t * t / sigma2(b));
    }
    g(b) = ad / std::sqrt(std::numbers::pi * sigma2(b)) * sum;
  }
  return g;
}

RVec bussgang_gain_one_bit(const CMat& precoder, double P, int B) {
  const RVec sigma2 = row_powers(precoder);
  return std::sqrt(2.0 * P / (std::numbers::pi * B)) * sigma2.cwiseSqrt().cwiseInverse();
}

CMat one_bit_output_covariance(const CMat& precoder, double P, int B) {
  const RVec d = row_powers(precoder);
  const RVec inv_sqrt = d.cwiseSqrt().cwiseInverse();
  const CMat C = precoder * precoder.adjoint();
  const double kappa = 2.0 * P / (std::numbers::pi * B);
  const Eigen::Index n = C.rows();
  CMat out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = inv_sqrt(i) * inv_sqrt(j);
      const cd c = C(i, j) * w;
      out(i, j) = kappa * cd(clipped_asin(c.real()), clipped_asin(c.imag()));
    }
  }
  // The diagonal is exactly asin(1) up to rounding.
  out.diagonal().setConstant(cd(P / B, 0.0));
  return out;
}

CMat distortion_covariance(const CMat& Cxx, const RVec& gain,
                           const CMat& precoder) {
  if (Cxx.rows() != gain.size() || precoder.rows() != gain.size()) {
    throw std::invalid_argument("distortion_covariance: dimension mismatch");
  }
  const CMat GP = gain.asDiagonal() * precoder;
  CMat Cdd = Cxx - GP * GP.adjoint();
  return 0.5 * (Cdd + Cdd.adjoint());
}

RVec sindr(const ChannelRealization& ch, const CMat& precoder,
           const RVec& gain, const CMat& Cdd, double N0) {
  const CMat& H = ch.matrix();
  const CMat M = H * gain.asDiagonal() * precoder;  // M(u,v) = h_u^T G p_v
  const CMat HCH = H * Cdd * H.adjoint();
  const int U = ch.users();
  RVec gamma(U);
  for (int u = 0; u < U; ++u) {
    const double signal = std::norm(M(u, u));
    const double interference = M.row(u).squaredNorm() - signal;
    const double distortion = std::max(0.0, HCH(u, u).real());
    gamma(u) = signal / (interference + distortion + N0);
  }
  return gamma;
}

BussgangModel analyze_one_bit(const ChannelRealization& ch,
                              const LinearPrecoder& lp, double P, double N0) {
  BussgangModel m;
  const int B = ch.antennas();
  m.gain = bussgang_gain_one_bit(lp.matrix, P, B);
  m.Cxx = one_bit_output_covariance(lp.matrix, P, B);
  m.Cdd = distortion_covariance(m.Cxx, m.gain, lp.matrix);
  m.sindr = sindr(ch, lp.matrix, m.gain, m.Cdd, N0);
  return m;
}

RVec rate_lower_bound_one_bit(const ChannelRealization& ch,
                              const LinearPrecoder& lp, double P, double N0) {
  const RVec gamma = analyze_one_bit(ch, lp, P, N0).sindr;
  return gamma.unaryExpr([](double g) { return std::log2(1.0 + g); });
}

double asymptotic_gain(int levels, double delta, int B, double P) {
  const double alpha = gaussian_power_scale(levels, delta, B, P);
  double sum = 0.0;
  for (int i = 1; i < levels; ++i) {
    const double t = i - levels / 2.0;
    sum += std::exp(-(B * delta * delta / P) * t * t);
  }
  return alpha * delta * std::sqrt(B / (std::numbers::pi * P)) * sum;
}

double asymptotic_gain_optimized(int levels, int B, double P) {
  if (levels <= 0) return 1.0;
  return asymptotic_gain(levels, optimize_step_size(levels, P / (2.0 * B)), B, P);
}

double effective_snr(double gain, double rho) {
  if (!(gain > 0.0) || gain > 1.0 + 1e-12 || !(rho > 0.0)) {
    throw std::invalid_argument("effective_snr: need 0 < G <= 1 and rho > 0");
  }
  const double g2 = gain * gain;
  return g2 * rho / ((1.0 - g2) * rho + 1.0);
}

double asymptotic_sindr(LinearKind kind, double rho_bar, int B, int U) {
  if (U < 1 || B < 1) throw std::invalid_argument("asymptotic_sindr: bad dimensions");
  const double r = static_cast<double>(B) / U;
  switch (kind) {
    case LinearKind::WF:
      return 0.5 * rho_bar * (r - 1.0) - 0.5 +
             0.5 * std::sqrt(rho_bar * rho_bar * (r - 1.0) * (r - 1.0) +
                             2.0 * rho_bar * (r + 1.0) + 1.0);
    case LinearKind::ZF:
      return rho_bar * (r - 1.0);
    case LinearKind::MRT:
      return rho_bar * B / (rho_bar * (U - 1) + U);
  }
  throw std::invalid_argument("asymptotic_sindr: unknown precoder");
}

double ber_approximation(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("ber_approximation: gamma < 0");
  return std_normal_tail(std::sqrt(gamma));
}

}  // namespace qprecode
