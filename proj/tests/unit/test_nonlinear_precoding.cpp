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
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"
#include "qprecode/channel.hpp"
#include "qprecode/errors.hpp"
#include "qprecode/nonlinear_precoding.hpp"
#include "qprecode/rng.hpp"

using namespace qprecode;

namespace {

CVec random_symbols(int U, Rng& rng) { return sample_symbols(Constellation::qpsk(), U, rng); }

CVec random_vector(int n, Rng& rng) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

void check_feasible(const CVec& x, double P) {
  const int B = static_cast<int>(x.size());
  const double a = std::sqrt(P / (2.0 * B));
  for (int b = 0; b < B; ++b) {
    CHECK(std::abs(x(b).real()) == a);
    CHECK(std::abs(x(b).imag()) == a);
  }
  CHECK(x.squaredNorm() == doctest::Approx(P).epsilon(1e-14));
}

}  // namespace

TEST_SUITE("nonlinear_precoding") {
  TEST_CASE("optimal beta examples") {
    CMat one(1, 1);
    one << 1.0;
    CVec s(1), x(1);
    s << 1.0;
    x << 1.0;
    CHECK(optimal_beta(one, s, x, 0.0) == doctest::Approx(1.0));
    x << cd(1.0, 1.0);
    CHECK(optimal_beta(one, s, x, 1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(optimal_beta(one, s, -x, 1.0) == doctest::Approx(-1.0 / 3.0));
  }

  TEST_CASE("objective forms") {
    CMat one(1, 1);
    one << 2.0;
    CVec s(1), x(1);
    s << cd(1.0, -1.0);
    x << cd(1.0, -1.0);
    CHECK(qp_objective(one, s, x, 0.5, 0.0) == doctest::Approx(0.0));
    CHECK(qp_objective_best_beta(one, s, x, 0.0) == doctest::Approx(0.0));
    const CVec zero = CVec::Zero(1);
    // ||0 - 0.7 * 2 (1 - j)||^2 + 0.7^2 * U N0
    CHECK(qp_objective(one, zero, x, 0.7, 0.2) == doctest::Approx(0.49 * 8.0 + 0.49 * 0.2));
    CHECK(qp_objective_best_beta(one, zero, x, 0.2) == 0.0);

    Rng rng(103);
    for (int t = 0; t < 500; ++t) {
      const int U = 1 + t % 4;
      const int B = U + t % 5;
      const ChannelRealization ch = sample_channel(U, B, rng);
      const CVec sv = random_vector(U, rng);
      CVec xv = sign_quantize_real(realify(random_vector(B, rng)), 1.0, B);
      const double N0 = 0.05 + 0.01 * t;
      double beta = optimal_beta(ch.matrix(), sv, xv, N0);
      if (beta <= 0.0) {
        xv = -xv;
        beta = -beta;
      }
      const double direct = qp_objective(ch.matrix(), sv, xv, beta, N0);
      const double reduced = qp_objective_best_beta(ch.matrix(), sv, xv, N0);
      CHECK(std::abs(direct - reduced) <= 1e-12 * std::max(1.0, direct));
      // beta_hat is the minimizer along the ray.
      CHECK(qp_objective(ch.matrix(), sv, xv, beta * 1.01, N0) >= direct);
      CHECK(qp_objective(ch.matrix(), sv, xv, beta * 0.99, N0) >= direct);
    }
  }

  TEST_CASE("real-valued embedding") {
    CMat j(1, 1);
    j << cd(0.0, 1.0);
    const RealEmbedding e = realify(ChannelRealization(j), CVec::Zero(1));
    RMat expected(2, 2);
    expected << 0.0, -1.0, 1.0, 0.0;
    CHECK(e.H == expected);

    Rng rng(107);
    for (int t = 0; t < 50; ++t) {
      const CVec v = random_vector(7, rng);
      CHECK(complexify(realify(v)) == v);
      const ChannelRealization ch = sample_channel(3, 7, rng);
      const CVec s = random_vector(3, rng);
      const RealEmbedding emb = realify(ch, s);
      CHECK((emb.H * realify(v)).squaredNorm() ==
            doctest::Approx((ch.matrix() * v).squaredNorm()).epsilon(1e-12));
      CHECK((complexify(emb.H * realify(v)) - ch.matrix() * v).norm() < 1e-12);
      CHECK(emb.s == realify(s));
    }
  }

  TEST_CASE("lifted matrix reproduces the objective") {
    Rng rng(109);
    for (int t = 0; t < 50; ++t) {
      const int U = 2;
      const int B = 4;
      const double N0 = 0.1 + 0.02 * t;
      const double P = 1.0 + 0.1 * t;
      const ChannelRealization ch = sample_channel(U, B, rng);
      const CVec s = random_symbols(U, rng);
      const RealEmbedding emb = realify(ch, s);
      const RMat T = lifted_matrix(emb, N0, P);
      CHECK((T - T.transpose()).norm() == 0.0);
      RMat expected(2 * B + 1, 2 * B + 1);
      expected.topLeftCorner(2 * B, 2 * B) =
          emb.H.transpose() * emb.H + (U * N0 / P) * RMat::Identity(2 * B, 2 * B);
      expected.topRightCorner(2 * B, 1) = -emb.H.transpose() * emb.s;
      expected.bottomLeftCorner(1, 2 * B) = -(emb.H.transpose() * emb.s).transpose();
      expected(2 * B, 2 * B) = emb.s.squaredNorm();
      CHECK((T - expected).norm() < 1e-12);

      const CVec x = sign_quantize_real(realify(random_vector(B, rng)), P, B);
      const double beta = 0.37;
      RVec lifted(2 * B + 1);
      lifted << beta * realify(x), 1.0;
      const double via_trace = lifted.dot(T * lifted);
      CHECK(via_trace == doctest::Approx(qp_objective(ch.matrix(), s, x, beta, N0)).epsilon(1e-12));
    }
  }

  TEST_CASE("exhaustive search finds the brute-force optimum") {
    CMat one(1, 1);
    one << 1.0;
    CVec s(1);
    s << cd(1.0, 1.0) / std::sqrt(2.0);
    const PrecodeResult r1 = exhaustive_qp(ChannelRealization(one), s, 0.0, 2.0);
    CHECK(r1.x(0) == cd(1.0, 1.0));

    Rng rng(113);
    for (int t = 0; t < 60; ++t) {
      const int B = 1 + t % 6;
      const int U = 1 + t % std::min(B, 3);
      const ChannelRealization ch = sample_channel(U, B, rng);
      const CVec sv = random_symbols(U, rng);
      const double N0 = std::pow(10.0, -0.1 * (t % 20));
      const PrecodeResult r = exhaustive_qp(ch, sv, N0, 1.0);
      const oracle::QpOptimum ref = oracle::brute_force_qp(ch.matrix(), sv, N0, 1.0);
      CAPTURE(B);
      CHECK(r.objective == doctest::Approx(ref.objective).epsilon(1e-10));
      CHECK((r.x - ref.x).norm() < 1e-12);
      check_feasible(r.x, 1.0);
      CHECK(r.beta == doctest::Approx(optimal_beta(ch.matrix(), sv, r.x, N0)).epsilon(1e-14));
      CHECK(r.beta > 0.0);
      // Negating the symbols negates the optimal vector.
      CHECK((exhaustive_qp(ch, -sv, N0, 1.0).x + r.x).norm() < 1e-12);
    }
    CHECK_THROWS_AS(exhaustive_qp(sample_channel(2, 13, rng), random_symbols(2, rng), 0.1, 1.0),
                    ConfigError);
  }

  TEST_CASE("exhaustive search at B = 2 beats every candidate") {
    Rng rng(127);
    const ChannelRealization ch = sample_channel(1, 2, rng);
    const CVec s = random_symbols(1, rng);
    const PrecodeResult r = exhaustive_qp(ch, s, 0.2, 1.0);
    for (std::uint64_t code = 0; code < 16; ++code) {
      const CVec x = oracle::candidate(code, 2, std::sqrt(0.25));
      CHECK(r.objective <= qp_objective_best_beta(ch.matrix(), s, x, 0.2) + 1e-15);
    }
  }

  TEST_CASE("squared infinity-norm prox") {
    RVec z(2);
    z << 3.0, 1.0;
    const RVec u = prox_sq_linf(z, 0.5);
    CHECK(u(0) == doctest::Approx(1.5));
    CHECK(u(1) == doctest::Approx(1.0));
    CHECK(oracle::prox_sq_linf_objective(z, u, 0.5) == doctest::Approx(2.25));
    RVec alt(2);
    alt << 4.0 / 3.0, 4.0 / 3.0;
    CHECK(oracle::prox_sq_linf_objective(z, alt, 0.5) > 2.25);

    CHECK(prox_sq_linf(RVec::Zero(5), 1.0).norm() == 0.0);
    RVec w(3);
    w << -2.0, 0.5, 1.5;
    CHECK((prox_sq_linf(w, 1e-12) - w).norm() < 1e-9);
    CHECK_THROWS_AS(prox_sq_linf(w, 0.0), std::invalid_argument);
  }

  TEST_CASE("prox agrees with the bisection oracle and beats perturbations") {
    Rng rng(131);
    for (int t = 0; t < 1000; ++t) {
      const int n = 1 + static_cast<int>(rng.uniform() * 40);
      RVec z(n);
      const double scale = std::pow(10.0, 2.0 * rng.uniform() - 1.0);
      for (int i = 0; i < n; ++i) z(i) = scale * rng.normal();
      const double lambda = std::pow(10.0, 4.0 * rng.uniform() - 2.0);
      const RVec u = prox_sq_linf(z, lambda);
      const RVec ref = oracle::prox_sq_linf_bisection(z, lambda);
      CHECK((u - ref).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, scale));
      const double f = oracle::prox_sq_linf_objective(z, u, lambda);
      int better = 0;
      for (int k = 0; k < 1000; ++k) {
        RVec d(n);
        for (int i = 0; i < n; ++i) d(i) = rng.normal();
        d *= 0.1 * rng.uniform() / d.norm();
        if (oracle::prox_sq_linf_objective(z, u + d, lambda) < f - 1e-14) ++better;
      }
      CHECK(better == 0);
    }
  }

  TEST_CASE("least-squares prox") {
    Rng rng(137);
    // Zero channel: the prox is the identity.
    const LeastSquaresProx zero(RMat::Zero(4, 6));
    RVec w(6);
    for (int i = 0; i < 6; ++i) w(i) = rng.normal();
    CHECK((zero(w, RVec::Zero(4)) - w).norm() < 1e-14);

    for (int t = 0; t < 50; ++t) {
      const ChannelRealization ch = sample_channel(3, 8, rng);
      const RealEmbedding emb = realify(ch, random_vector(3, rng));
      const LeastSquaresProx prox(emb.H);
      RVec v(16);
      for (int i = 0; i < 16; ++i) v(i) = rng.normal();
      const RVec b = prox(v, emb.s);
      // First-order condition of ||s - H b||^2 + 1/2 ||b - v||^2.
      const RVec grad = 2.0 * emb.H.transpose() * (emb.H * b - emb.s) + (b - v);
      CHECK(grad.norm() < 1e-9);
      // A point that fits the symbols exactly is a fixed point.
      const RVec s_fit = emb.H * v;
      CHECK((prox(v, s_fit) - v).norm() < 1e-9);
    }
  }

  TEST_CASE("semidefinite relaxation bounds the optimum") {
    Rng rng(139);
    int rank_one = 0;
    for (int t = 0; t < 100; ++t) {
      const int B = 2 + t % 7;
      const int U = 1 + t % 2;
      const ChannelRealization ch = sample_channel(U, B, rng);
      const CVec s = random_symbols(U, rng);
      const double N0 = std::pow(10.0, -0.1 * (t % 25));
      SdrOptions opts;
      opts.solver.tol = 1e-8;
      opts.solver.max_iter = 200000;
      const SdrResult r = sdr_precode(ch, s, N0, 1.0, opts);
      const PrecodeResult ex = exhaustive_qp(ch, s, N0, 1.0);
      const RMat T = lifted_matrix(realify(ch, s), N0, 1.0);
      const double scale = T.cwiseAbs().maxCoeff();
      CAPTURE(t);
      CHECK(r.sdp.converged);
      CHECK(r.sdp.objective <= ex.objective + 1e-6 * scale);
      check_feasible(r.result.x, 1.0);
      CHECK(r.result.objective >= ex.objective - 1e-12);

      // The dual oracle certifies the solver's optimal value.
      const oracle::DualResult dual = oracle::sdp_dual_value(T);
      CHECK(dual.value <= ex.objective + 1e-9 * scale);
      CHECK(r.sdp.objective == doctest::Approx(dual.value).epsilon(1e-4).scale(scale));

      // Rank-one solutions are tight: the rounded vector is optimal.
      const RVec ev = Eigen::SelfAdjointEigenSolver<RMat>(r.sdp.X).eigenvalues();
      if (ev(ev.size() - 2) < 1e-6 * ev(ev.size() - 1)) {
        ++rank_one;
        CHECK(r.result.objective == doctest::Approx(ex.objective).epsilon(1e-5));
      }
    }
    MESSAGE("rank-one relaxations: " << rank_one << " of 100");
  }

  TEST_CASE("randomized rounding keeps the best candidate") {
    Rng rng(149);
    for (int t = 0; t < 20; ++t) {
      const ChannelRealization ch = sample_channel(2, 8, rng);
      const CVec s = random_symbols(2, rng);
      SdrOptions rank1;
      SdrOptions randomized;
      randomized.extraction = SdrExtraction::Randomized;
      const SdrResult a = sdr_precode(ch, s, 0.1, 1.0, rank1);
      Rng draws(t);
      const SdrResult b = sdr_precode(ch, s, 0.1, 1.0, randomized, &draws);
      CHECK(b.result.method == NonlinearMethod::SDRr);
      CHECK(b.result.objective <= a.result.objective + 1e-12);
      check_feasible(b.result.x, 1.0);
    }
    SdrOptions randomized;
    randomized.extraction = SdrExtraction::Randomized;
    CHECK_THROWS_AS(sdr_precode(sample_channel(2, 4, rng), random_symbols(2, rng), 0.1, 1.0,
                                randomized),
                    std::invalid_argument);
  }

  TEST_CASE("SQUID on small systems") {
    // At rho = 1 the relaxation usually shares its sign pattern with the
    // 1-bit optimum. The agreement falls at higher SNR, where the relaxed
    // minimizer fits the symbols with many small entries.
    const int trials = 1000;
    for (const double snr_db : {0.0, 10.0}) {
      Rng rng(151);
      const double N0 = std::pow(10.0, -snr_db / 10.0);
      int matches = 0;
      for (int t = 0; t < trials; ++t) {
        const ChannelRealization ch = sample_channel(1, 2, rng);
        const CVec s = random_symbols(1, rng);
        const PrecodeResult r = squid_precode(ch, s, N0, 1.0);
        check_feasible(r.x, 1.0);
        if ((r.x - exhaustive_qp(ch, s, N0, 1.0).x).norm() < 1e-12) ++matches;
      }
      MESSAGE("SNR " << snr_db << " dB: SQUID matches the optimum in " << matches << " of "
                     << trials);
      if (snr_db == 0.0) CHECK(matches >= 950);
    }
  }

  TEST_CASE("SQUID converges to the minimizer of the relaxed problem") {
    Rng rng(153);
    SquidOptions long_run;
    long_run.max_iters = 5000;
    long_run.stable_iters = 5000;
    for (int t = 0; t < 40; ++t) {
      const int B = 2 + t % 4;
      const int U = 1 + t % 2;
      const double N0 = std::pow(10.0, -0.1 * (5 * (t % 4)));
      const ChannelRealization ch = sample_channel(U, B, rng);
      const CVec s = random_symbols(U, rng);
      const RealEmbedding emb = realify(ch, s);
      const double lambda = 2.0 * B * U * N0;
      const RVec b = SquidPrecoder(ch, N0, 1.0, long_run).relaxed_solution(s);
      const RVec ref = oracle::sq_linf_ls_minimizer(emb.H, emb.s, lambda);
      const double f = oracle::sq_linf_ls_objective(emb.H, emb.s, b, lambda);
      const double f_ref = oracle::sq_linf_ls_objective(emb.H, emb.s, ref, lambda);
      CAPTURE(t);
      CHECK(f == doctest::Approx(f_ref).epsilon(1e-6));
    }
  }

  TEST_CASE("SQUID without noise and at the iteration cap") {
    Rng rng(157);
    const ChannelRealization ch = sample_channel(4, 32, rng);
    const CVec s = random_symbols(4, rng);
    const PrecodeResult r0 = squid_precode(ch, s, 0.0, 1.0);
    check_feasible(r0.x, 1.0);
    CHECK(r0.beta > 0.0);

    SquidOptions capped;
    capped.max_iters = 3;
    capped.stable_iters = 50;
    const PrecodeResult r = squid_precode(ch, s, 0.1, 1.0, capped);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
    check_feasible(r.x, 1.0);

    const SquidPrecoder pre(ch, 0.1, 1.0);
    int iterations = 0;
    bool converged = false;
    const RVec b = pre.relaxed_solution(s, &iterations, &converged);
    CHECK(b.size() == 64);
    CHECK(iterations >= 1);
    CHECK((pre.precode(s).x - squid_precode(ch, s, 0.1, 1.0).x).norm() == 0.0);
  }

  TEST_CASE("sphere search matches brute force at fixed beta") {
    Rng rng(163);
    for (int t = 0; t < 100; ++t) {
      const int B = 1 + t % 6;
      const int U = 1 + t % std::min(B, 2);
      const ChannelRealization ch = sample_channel(U, B, rng);
      const double N0 = std::pow(10.0, -0.1 * (t % 20));
      const SphereSystem sys = sphere_system(ch, N0, 1.0);
      // Q R reproduces the augmented matrix and R has a real, non-negative diagonal.
      CMat Hbar(U + B, B);
      Hbar.topRows(U) = ch.matrix();
      Hbar.bottomRows(B) = std::sqrt(U * N0) * CMat::Identity(B, B);
      CHECK((sys.Q * sys.R - Hbar).norm() < 1e-12);
      for (int b = 0; b < B; ++b) {
        CHECK(sys.R(b, b).imag() == 0.0);
        CHECK(sys.R(b, b).real() >= 0.0);
      }
      const CVec s = random_symbols(U, rng);
      const CVec y = sys.Q.topRows(U).adjoint() * s;
      const double beta = 0.2 + rng.uniform();
      const double amp = std::sqrt(1.0 / (2.0 * B));
      const auto found =
          sphere_search(sys.R, y, beta, amp, std::numeric_limits<double>::infinity());
      REQUIRE(found.has_value());
      const oracle::QpOptimum ref = oracle::brute_force_sphere(sys.R, y, beta, amp);
      CHECK(found->metric == doctest::Approx(ref.objective).epsilon(1e-12));
      CHECK((found->x - ref.x).norm() < 1e-12);
      // A radius just above the optimum still finds it; one below finds nothing.
      const auto tight = sphere_search(sys.R, y, beta, amp, ref.objective * (1 + 1e-9) + 1e-300);
      REQUIRE(tight.has_value());
      CHECK((tight->x - ref.x).norm() < 1e-12);
      CHECK_FALSE(sphere_search(sys.R, y, beta, amp, ref.objective * (1 - 1e-9)).has_value());
    }
  }

  TEST_CASE("sphere precoding") {
    Rng rng(167);
    for (int t = 0; t < 30; ++t) {
      const ChannelRealization ch = sample_channel(2, 8, rng);
      const CVec s = random_symbols(2, rng);
      const PrecodeResult r = sphere_precode(ch, s, 0.1, 1.0);
      check_feasible(r.x, 1.0);
      CHECK(r.objective >= exhaustive_qp(ch, s, 0.1, 1.0).objective - 1e-12);
      CHECK(r.iterations >= 1);
      CHECK(r.iterations <= 3);
    }
    CHECK_THROWS_AS(sphere_precode(sample_channel(2, 17, rng), random_symbols(2, rng), 0.1, 1.0),
                    ConfigError);
  }

  TEST_CASE("objective ordering on small systems") {
    // Exhaustive search lower-bounds every method. Sphere precoding is a
    // local alternation over beta, so it beats the relaxation-based methods
    // on most instances and on average, but not on every instance.
    Rng rng(173);
    const int instances = 200;
    double sum_sp = 0.0;
    double sum_others[3] = {0.0, 0.0, 0.0};
    int sp_wins[3] = {0, 0, 0};
    for (int t = 0; t < instances; ++t) {
      const int B = 4 + t % 5;
      const ChannelRealization ch = sample_channel(2, B, rng);
      const CVec s = random_symbols(2, rng);
      const double N0 = 0.1;
      const double ex = exhaustive_qp(ch, s, N0, 1.0).objective;
      const double sp = sphere_precode(ch, s, N0, 1.0).objective;
      SdrOptions rnd;
      rnd.extraction = SdrExtraction::Randomized;
      Rng draws(t);
      const double others[3] = {
          sdr_precode(ch, s, N0, 1.0, {}).result.objective,
          sdr_precode(ch, s, N0, 1.0, rnd, &draws).result.objective,
          squid_precode(ch, s, N0, 1.0).objective,
      };
      CHECK(ex <= sp + 1e-12);
      sum_sp += sp;
      for (int k = 0; k < 3; ++k) {
        CHECK(ex <= others[k] + 1e-12);
        sum_others[k] += others[k];
        if (sp <= others[k] + 1e-12) ++sp_wins[k];
      }
    }
    MESSAGE("SP at least as good as SDR1 / SDRr / SQUID in " << sp_wins[0] << " / " << sp_wins[1]
                                                             << " / " << sp_wins[2] << " of "
                                                             << instances);
    for (int k = 0; k < 3; ++k) {
      CHECK(sum_sp <= sum_others[k]);
      CHECK(sp_wins[k] >= instances * 8 / 10);
    }
  }

  TEST_CASE("every precoder output satisfies the power constraint exactly") {
    Rng rng(179);
    for (int t = 0; t < 20; ++t) {
      const ChannelRealization ch = sample_channel(2, 6, rng);
      const CVec s = random_symbols(2, rng);
      const double P = 0.5 + t;
      Rng draws(t);
      SdrOptions rnd;
      rnd.extraction = SdrExtraction::Randomized;
      check_feasible(exhaustive_qp(ch, s, 0.1, P).x, P);
      check_feasible(sdr_precode(ch, s, 0.1, P, {}).result.x, P);
      check_feasible(sdr_precode(ch, s, 0.1, P, rnd, &draws).result.x, P);
      check_feasible(squid_precode(ch, s, 0.1, P).x, P);
      check_feasible(sphere_precode(ch, s, 0.1, P).x, P);
    }
  }
}
