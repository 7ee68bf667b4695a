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

#include <vector>

#include "qprecode/types.hpp"

namespace qprecode {

// Symmetric uniform DAC with L levels per real dimension. Labels are
// alpha * delta * (i - (L-1)/2); finite thresholds are delta * (i - L/2)
// for i = 1..L-1. A real value in [tau_k, tau_{k+1}) maps to label k.
struct QuantizerSpec {
  int levels = 2;
  double delta = 1.0;
  double alpha = 1.0;
  std::vector<double> labels;
  std::vector<double> thresholds;

  double bits() const;
  double quantize_real(double v) const;
};

QuantizerSpec make_uniform_quantizer(int levels, double delta, double alpha);

/// Mean-square error E[(Q(w) - w)^2] of the unit-scale quantizer for
/// w ~ N(0, variance).
double quantizer_mse(int levels, double delta, double variance);

/// Step size minimizing quantizer_mse (golden-section search over
/// (0, 8 sigma]).
double optimize_step_size(int levels, double input_variance);

/// Output scale so that B * E|Q(z)|^2 = P for z ~ CN(0, P/B).
double gaussian_power_scale(int levels, double delta, int B, double P);

/// Step size optimized for CN(0, P/B) antenna inputs and the matching
/// power-normalizing scale.
QuantizerSpec make_power_normalized_quantizer(int levels, int B, double P);

/// Entrywise quantization of real and imaginary parts. Throws on
/// non-finite input.
CVec quantize(const QuantizerSpec& spec, const CVec& z);

/// sqrt(P/(2B)) (sgn Re z + j sgn Im z) with sgn(0) = +1.
CVec quantize_one_bit(const CVec& z, double P, int B);

}  // namespace qprecode
