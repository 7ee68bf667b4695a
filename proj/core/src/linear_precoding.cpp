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

#include "qprecode/linear_precoding.hpp"

#include <cmath>
#include <stdexcept>

#include "qprecode/errors.hpp"

namespace qprecode {

std::string_view to_string(LinearKind kind) {
  switch (kind) {
    case LinearKind::WF: return "WF";
    case LinearKind::ZF: return "ZF";
    case LinearKind::MRT: return "MRT";
  }
  return "?";
}

namespace {

// Solves (H H^H + load I) F^H = H for F = H^H (H H^H + load I)^{-1}. Only the
// U x U Gram matrix is factorized.
CMat regularized_inverse(const CMat& H, double load) {
  CMat gram = H * H.adjoint();
  gram.diagonal().array() += load;
  Eigen::LLT<CMat> llt(gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-12)) {
    throw DegenerateError("linear precoder: Gram matrix is singular");
  }
  return llt.solve(H).adjoint();
}

LinearPrecoder normalized(LinearKind kind, CMat F, double P) {
  const double beta = F.norm() / std::sqrt(P);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DegenerateError("linear precoder: zero precoding matrix");
  }
  return {kind, F / beta, beta};
}

}  // namespace

LinearPrecoder wf_precoder(const ChannelRealization& ch, double N0, double P) {
  if (!(N0 >= 0.0) || !(P > 0.0)) throw std::invalid_argument("wf_precoder: bad N0 or P");
  const double load = ch.users() * N0 / P;
  return normalized(LinearKind::WF, regularized_inverse(ch.matrix(), load), P);
}

LinearPrecoder zf_precoder(const ChannelRealization& ch, double P) {
  if (!(P > 0.0)) throw std::invalid_argument("zf_precoder: bad P");
  return normalized(LinearKind::ZF, regularized_inverse(ch.matrix(), 0.0), P);
}

LinearPrecoder mrt_precoder(const ChannelRealization& ch, double P) {
  if (!(P > 0.0)) throw std::invalid_argument("mrt_precoder: bad P");
  const double fro = ch.matrix().norm();
  if (!(fro > 0.0)) throw DegenerateError("mrt_precoder: all-zero channel");
  const int B = ch.antennas();
  const double beta = fro / (B * std::sqrt(P));
  return {LinearKind::MRT, ch.matrix().adjoint() / (beta * B), beta};
}

LinearPrecoder make_linear_precoder(LinearKind kind,
                                    const ChannelRealization& ch, double N0,
                                    double P) {
  switch (kind) {
    case LinearKind::WF: return wf_precoder(ch, N0, P);
    case LinearKind::ZF: return zf_precoder(ch, P);
    case LinearKind::MRT: return mrt_precoder(ch, P);
  }
  throw std::invalid_argument("unknown linear precoder");
}

CVec linear_quantized_precode(const LinearPrecoder& lp, const CVec& s,
                              const DacModel& dac) {
  if (s.size() != lp.matrix.cols()) {
    throw std::invalid_argument("linear_quantized_precode: symbol length mismatch");
  }
  CVec z = lp.matrix * s;
  if (const auto* q = std::get_if<QuantizerSpec>(&dac)) return quantize(*q, z);
  return z;
}

}  // namespace qprecode
