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

#include <cmath>
#include <limits>
#include <variant>

#include "doctest.h"
#include "qprecode/channel.hpp"
#include "qprecode/errors.hpp"
#include "qprecode/linear_precoding.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/rng.hpp"

using namespace qprecode;

namespace {

// MSE objective E||s - beta H P s||^2 + beta^2 U N0 for s ~ CN(0, I) at the
// best beta > 0 for a fixed matrix Pm.
double linear_objective(const CMat& H, const CMat& Pm, double N0) {
  const double U = static_cast<double>(H.rows());
  const CMat M = H * Pm;
  const double a = M.trace().real();
  const double b = M.squaredNorm() + U * N0;
  const double beta = std::max(a / b, 0.0);
  return U - 2.0 * beta * a + beta * beta * b;
}

// Distance between two matrices after removing a positive scale.
double direction_gap(const CMat& A, const CMat& B) {
  return (A / A.norm() - B / B.norm()).norm();
}

}  // namespace

TEST_SUITE("linear_precoding") {
  TEST_CASE("scalar Wiener filter") {
    CMat h(1, 1);
    h << 1.0;
    const LinearPrecoder wf = wf_precoder(ChannelRealization(h), 0.5, 1.0);
    CHECK(wf.beta == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(wf.matrix(0, 0) - 1.0) < 1e-14);
  }

  TEST_CASE("zero forcing on the identity channel") {
    const LinearPrecoder zf = zf_precoder(ChannelRealization(CMat::Identity(2, 2)), 4.0);
    CHECK(zf.beta == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK((zf.matrix - std::sqrt(2.0) * CMat::Identity(2, 2)).norm() < 1e-13);
    CHECK((zf.matrix * zf.matrix.adjoint()).trace().real() == doctest::Approx(4.0));
  }

  TEST_CASE("maximal ratio transmission on a row channel") {
    CMat h(1, 2);
    h << 1.0, 1.0;
    const LinearPrecoder mrt = mrt_precoder(ChannelRealization(h), 1.0);
    CHECK(mrt.beta == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(std::abs(mrt.matrix(0, 0) - std::sqrt(0.5)) < 1e-14);
    CHECK(std::abs(mrt.matrix(1, 0) - std::sqrt(0.5)) < 1e-14);
  }

  TEST_CASE("all precoders meet the power constraint") {
    Rng rng(41);
    for (int t = 0; t < 50; ++t) {
      const int U = 1 + t % 8;
      const int B = U + 1 + t % 13;
      const ChannelRealization ch = sample_channel(U, B, rng);
      const double P = 0.5 + 0.1 * t;
      const double N0 = std::pow(10.0, -1.0 + 0.05 * t);
      for (const LinearKind k : {LinearKind::WF, LinearKind::ZF, LinearKind::MRT}) {
        const LinearPrecoder lp = make_linear_precoder(k, ch, N0, P);
        CHECK(lp.beta > 0.0);
        CHECK((lp.matrix * lp.matrix.adjoint()).trace().real() ==
              doctest::Approx(P).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("zero forcing removes multiuser interference") {
    Rng rng(43);
    const ChannelRealization ch = sample_channel(4, 16, rng);
    const LinearPrecoder zf = zf_precoder(ch, 1.0);
    const CMat M = ch.matrix() * zf.matrix;
    CHECK((M - CMat::Identity(4, 4) / zf.beta).norm() < 1e-12);
    // Noiseless channel with infinite resolution: beta y = s.
    CVec s(4);
    for (int u = 0; u < 4; ++u) s(u) = rng.complex_normal();
    const CVec x = linear_quantized_precode(zf, s, InfiniteResolution{});
    CHECK((zf.beta * apply_channel(ch, x, CVec::Zero(4)) - s).norm() < 1e-12);
  }

  TEST_CASE("Wiener filter limits match zero forcing and matched filtering") {
    Rng rng(47);
    for (int t = 0; t < 10; ++t) {
      const ChannelRealization ch = sample_channel(3, 9, rng);
      const CMat wf_low = wf_precoder(ch, 1e-8, 1.0).matrix;
      const CMat wf_high = wf_precoder(ch, 1e8, 1.0).matrix;
      CHECK(direction_gap(wf_low, zf_precoder(ch, 1.0).matrix) < 1e-6);
      CHECK(direction_gap(wf_high, mrt_precoder(ch, 1.0).matrix) < 1e-6);
      CHECK(direction_gap(wf_high, ch.matrix().adjoint()) < 1e-6);
    }
  }

  TEST_CASE("Wiener filter is continuous in the noise level") {
    Rng rng(53);
    const ChannelRealization ch = sample_channel(4, 12, rng);
    const CMat a = wf_precoder(ch, 0.1, 1.0).matrix;
    const CMat b = wf_precoder(ch, 0.1 * (1.0 + 1e-7), 1.0).matrix;
    CHECK((a - b).norm() < 1e-6);
  }

  TEST_CASE("Wiener filter beats random power-feasible candidates") {
    Rng rng(59);
    for (int t = 0; t < 5; ++t) {
      const ChannelRealization ch = sample_channel(2, 4, rng);
      const double N0 = 0.2 + 0.3 * t;
      const double best = linear_objective(ch.matrix(), wf_precoder(ch, N0, 1.0).matrix, N0);
      int violations = 0;
      for (int k = 0; k < 100000 / 5; ++k) {
        CMat cand(4, 2);
        for (int i = 0; i < 8; ++i) cand(i % 4, i / 4) = rng.complex_normal();
        cand /= cand.norm();
        if (linear_objective(ch.matrix(), cand, N0) < best - 1e-12) ++violations;
      }
      CHECK(violations == 0);
      // Small perturbations of the optimum do not improve it either.
      const CMat wf = wf_precoder(ch, N0, 1.0).matrix;
      for (int k = 0; k < 1000; ++k) {
        CMat d(4, 2);
        for (int i = 0; i < 8; ++i) d(i % 4, i / 4) = rng.complex_normal(1e-6);
        CMat cand = wf + d;
        cand /= cand.norm();
        CHECK(linear_objective(ch.matrix(), cand, N0) >= best - 1e-12);
      }
    }
  }

  TEST_CASE("rank-deficient channels are reported") {
    CMat h(2, 4);
    h << 1.0, 2.0, 3.0, 4.0, 2.0, 4.0, 6.0, 8.0;
    const ChannelRealization ch(h);
    CHECK_THROWS_AS(zf_precoder(ch, 1.0), DegenerateError);
    CHECK_THROWS_AS(mrt_precoder(ChannelRealization(CMat::Zero(2, 4)), 1.0), DegenerateError);
    // Regularization keeps the Wiener filter well defined.
    CHECK_NOTHROW(wf_precoder(ch, 1.0, 1.0));
  }

  TEST_CASE("quantized pipeline") {
    Rng rng(61);
    const ChannelRealization ch = sample_channel(4, 32, rng);
    const LinearPrecoder wf = wf_precoder(ch, 0.1, 1.0);
    const QuantizerSpec one_bit = make_power_normalized_quantizer(2, 32, 1.0);
    for (int t = 0; t < 100; ++t) {
      CVec s(4);
      for (int u = 0; u < 4; ++u) s(u) = rng.complex_normal();
      CHECK((linear_quantized_precode(wf, s, InfiniteResolution{}) - wf.matrix * s).norm() == 0.0);
      CHECK(linear_quantized_precode(wf, s, one_bit).squaredNorm() ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
