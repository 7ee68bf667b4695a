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

#include "qprecode/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qprecode {

RMat project_psd(const RMat& S) {
  Eigen::SelfAdjointEigenSolver<RMat> eig(S);
  const RVec lambda = eig.eigenvalues().cwiseMax(0.0);
  const RMat& V = eig.eigenvectors();
  RMat out = V * lambda.asDiagonal() * V.transpose();
  return 0.5 * (out + out.transpose());
}

RMat project_diag_constraints(const RMat& S) {
  const Eigen::Index n = S.rows();
  RMat out = S;
  const double mean = S.diagonal().head(n - 1).mean();
  out.diagonal().head(n - 1).setConstant(mean);
  out(n - 1, n - 1) = 1.0;
  return out;
}

namespace {

double constraint_violation(const RMat& X) {
  const Eigen::Index n = X.rows();
  const auto d = X.diagonal().head(n - 1);
  const double mean = d.mean();
  double v = std::abs(X(n - 1, n - 1) - 1.0);
  for (Eigen::Index i = 0; i < n - 1; ++i) v = std::max(v, std::abs(d(i) - mean));
  return v;
}

}  // namespace

SdpSolution solve_diag_constrained_sdp(const RMat& T_in, const SdpOptions& opts) {
  const Eigen::Index n = T_in.rows();
  if (n < 3 || T_in.cols() != n) {
    throw std::invalid_argument("sdp: T must be square with n >= 3");
  }
  if (!(opts.rho > 0.0) || !(opts.relaxation > 0.0 && opts.relaxation < 2.0) ||
      opts.adaptive_interval < 1 || !(opts.adaptive_step > 1.0)) {
    throw std::invalid_argument("sdp: invalid penalty or relaxation");
  }
  const RMat T = 0.5 * (T_in + T_in.transpose());
  // The iteration runs on T / scale so that the fixed penalty is meaningful
  // regardless of the channel gain; the minimizer is unchanged.
  const double scale = std::max(T.cwiseAbs().maxCoeff(), 1e-300);
  double rho = opts.rho;
  RMat C = T / (scale * rho);

  RMat Z = RMat::Identity(n, n);
  RMat U = RMat::Zero(n, n);
  RMat X(n, n);
  SdpSolution sol;
  for (int it = 1; it <= opts.max_iter; ++it) {
    X = project_diag_constraints(Z - U - C);
    const RMat Xr = opts.relaxation * X + (1.0 - opts.relaxation) * Z;
    RMat Znew = project_psd(Xr + U);
    U += Xr - Znew;

    const double primal = (X - Znew).norm();
    const double dual = rho * (Znew - Z).norm();
    Z = std::move(Znew);
    sol.iterations = it;
    sol.primal_residual = primal;
    const double primal_ref = std::max({1.0, X.norm(), Z.norm()});
    const double dual_ref = std::max(1.0, rho * U.norm());
    if (primal <= opts.tol * primal_ref && dual <= opts.tol * dual_ref) {
      sol.converged = true;
      break;
    }
    // Residual balancing: keep the relative primal and dual residuals
    // within a factor adaptive_ratio of each other. The scaled dual
    // variable and the scaled cost move with the penalty.
    if (opts.adaptive_ratio > 1.0 && it % opts.adaptive_interval == 0) {
      const double rp = primal / primal_ref;
      const double rd = dual / dual_ref;
      double factor = 1.0;
      if (rp > opts.adaptive_ratio * rd) factor = opts.adaptive_step;
      if (rd > opts.adaptive_ratio * rp) factor = 1.0 / opts.adaptive_step;
      if (factor != 1.0) {
        rho *= factor;
        U /= factor;
        C = T / (scale * rho);
      }
    }
  }
  sol.X = Z;
  sol.objective = (T.cwiseProduct(Z)).sum();
  sol.constraint_residual = constraint_violation(Z);
  return sol;
}

}  // namespace qprecode
