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

#include "qprecode/channel.hpp"
#include "qprecode/linear_precoding.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/types.hpp"

// Closed-form analysis of linear-quantized precoding for Gaussian symbols
// s ~ CN(0, I). The quantized vector is split as x = G P s + d with d
// uncorrelated with s and G a real diagonal gain.

namespace qprecode {

struct BussgangModel {
  RVec gain;  // diagonal of G
  CMat Cxx;
  CMat Cdd;
  RVec sindr;
};

/// Diagonal of G for a uniform quantizer. Throws DegenerateError when a
/// row of P has zero power.
RVec bussgang_gain(const CMat& precoder, const QuantizerSpec& spec);

/// Diagonal of G for 1-bit DACs: sqrt(2P/(pi B)) diag(P P^H)^{-1/2}.
RVec bussgang_gain_one_bit(const CMat& precoder, double P, int B);

/// Output covariance of 1-bit quantized P s (arcsine law), scaled so each
/// antenna carries power P/B.
CMat one_bit_output_covariance(const CMat& precoder, double P, int B);

/// Cdd = Cxx - G P P^H G^H.
CMat distortion_covariance(const CMat& Cxx, const RVec& gain,
                           const CMat& precoder);

/// Per-user signal-to-interference-noise-and-distortion ratio.
RVec sindr(const ChannelRealization& ch, const CMat& precoder,
           const RVec& gain, const CMat& Cdd, double N0);

/// Full 1-bit model for one channel realization.
BussgangModel analyze_one_bit(const ChannelRealization& ch,
                              const LinearPrecoder& lp, double P, double N0);

/// log2(1 + gamma_u) per user for 1-bit DACs on this channel realization.
RVec rate_lower_bound_one_bit(const ChannelRealization& ch,
                              const LinearPrecoder& lp, double P, double N0);

/// Large-system average gain for an L-level quantizer with power-normalized
/// scale.
double asymptotic_gain(int levels, double delta, int B, double P);

/// Average gain for the step size used by the simulator
/// (make_power_normalized_quantizer). levels <= 0 means infinite resolution.
double asymptotic_gain_optimized(int levels, int B, double P);

/// G^2 rho / ((1 - G^2) rho + 1).
double effective_snr(double gain, double rho);

double asymptotic_sindr(LinearKind kind, double rho_bar, int B, int U);

/// 1 - Phi(sqrt(gamma)) for QPSK with nearest-neighbor decoding.
double ber_approximation(double gamma);

}  // namespace qprecode
