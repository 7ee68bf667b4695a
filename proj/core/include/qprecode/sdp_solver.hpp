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

#include "qprecode/types.hpp"

namespace qprecode {

struct SdpOptions {
  // Convergence threshold on the residuals of the trace-normalized problem.
  double tol = 1e-6;
  int max_iter = 20000;
  double rho = 1.0;
  // Relaxation factor of the splitting iteration, in (0, 2).
  double relaxation = 1.6;
  // Penalty adaptation: every adaptive_interval iterations the penalty is
  // multiplied or divided by adaptive_step when the relative primal and
  // dual residuals differ by more than adaptive_ratio. The default ratio
  // of 0 keeps the penalty fixed.
  double adaptive_ratio = 0.0;
  double adaptive_step = 2.0;
  int adaptive_interval = 10;
};

/// Result of minimizing tr(T X) over X >= 0 with X_11 = ... = X_{n-1,n-1}
/// and X_nn = 1.
struct SdpSolution {
  RMat X;
  double objective = 0.0;
  double primal_residual = 0.0;      // ||X_affine - X_psd||_F
  double constraint_residual = 0.0;  // max violation of the diagonal equalities
  int iterations = 0;
  bool converged = false;
};

/// Operator-splitting solver alternating an exact projection onto the
/// diagonal constraints with a PSD-cone projection. T is symmetrized on
/// entry; n = T.rows() must be >= 3. Returns converged = false when
/// max_iter is reached.
SdpSolution solve_diag_constrained_sdp(const RMat& T,
                                       const SdpOptions& opts = {});

/// Frobenius-nearest PSD matrix (negative eigenvalues clipped).
RMat project_psd(const RMat& S);

/// Frobenius projection onto {X : X_11 = ... = X_{n-1,n-1}, X_nn = 1}.
RMat project_diag_constraints(const RMat& S);

}  // namespace qprecode
