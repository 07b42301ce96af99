// Copyright 2026 The msoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msoc/oracle.hpp"

#include <cmath>

#include <doctest.h>

#include <Eigen/Dense>

#include "msoc/problem_file.hpp"

using namespace msoc;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("Riccati value matches the analytic tanh solution") {
  // q = r = 1, a = 0, b = 1, sigma = 1, T = 1, x0 = 0, no terminal weight:
  // P(t) = tanh(1 - t) and value = int_0^1 tanh(s) ds = ln(cosh 1).
  const LqrSolution lqr = solve_lqr(1, 1, 0, 1, 1, 1.0, 0.0, 0.0, 200);
  CHECK(lqr.value_at_x0 == doctest::Approx(std::log(std::cosh(1.0)))
                               .epsilon(1e-9));
  for (int i = 0; i <= 200; i += 40) {
    CHECK(lqr.P[i] ==
          doctest::Approx(std::tanh(1.0 - lqr.grid[i])).epsilon(1e-10));
    CHECK(lqr.L[i] == doctest::Approx(-lqr.P[i]).epsilon(1e-12));
  }
}

TEST_CASE("boundary condition and degenerate cases") {
  const LqrSolution lqr = solve_lqr(1, 2, -0.5, 1.5, 0.7, 2.0, 0.3, 0.9, 50);
  CHECK(lqr.P.back() == 0.9);  // P(T) = terminal exactly
  CHECK(lqr.s.back() == 0.0);

  const LqrSolution quiet = solve_lqr(1, 1, 0, 1, 0.0, 1.0, 0.0, 0.0, 50);
  CHECK(quiet.value_at_x0 == doctest::Approx(0.0));
}

TEST_CASE("optimal moment trajectory structure") {
  const LqrSolution lqr = solve_lqr(1, 1, 0, 1, 1, 1.0, 0.0, 0.0, 100);
  const MomentSolution sol = lqr_moment_solution(lqr);

  // Deterministic start at zero kills every moment except the constant.
  for (const auto& key : sol.keys) CHECK(sol.value(0, key) == 0.0);

  // The moment matrix is diag(1, rank-1) at every time: rank <= 2.
  for (int n : {10, 50, 100}) {
    Eigen::Matrix3d M;
    const double xx = sol.value(n, {2, 0});
    const double xu = sol.value(n, {1, 1});
    const double uu = sol.value(n, {0, 2});
    M << 1.0, sol.value(n, {1, 0}), sol.value(n, {0, 1}),
        sol.value(n, {1, 0}), xx, xu,
        sol.value(n, {0, 1}), xu, uu;
    CHECK(xx * uu - xu * xu == doctest::Approx(0.0).epsilon(1e-12));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(M);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("discretized trajectory objective approaches ln cosh 1") {
  const int N = 400;
  const LqrSolution lqr = solve_lqr(1, 1, 0, 1, 1, 1.0, 0.0, 0.0, N);
  const MomentSolution sol = lqr_moment_solution(lqr, Scheme::kTrapezoid);
  RelaxationConfig cfg;
  cfg.d_x = 1;
  cfg.d_u = 1;
  cfg.N = N;
  cfg.scheme = Scheme::kTrapezoid;
  const auto ctg = cost_to_go(sol, fixture("lqr"), cfg);
  CHECK(ctg.front().second ==
        doctest::Approx(std::log(std::cosh(1.0))).epsilon(2e-5));
  CHECK(ctg.back().second == 0.0);  // no terminal cost
}

TEST_CASE("oracle trajectory satisfies the assembled program") {
  const int N = 50;
  const ProblemSpec spec = fixture("lqr");
  RelaxationConfig cfg;
  cfg.d_x = 1;
  cfg.d_u = 1;
  cfg.N = N;

  for (Scheme scheme : {Scheme::kEuler, Scheme::kTrapezoid}) {
    cfg.scheme = scheme;
    const LqrSolution lqr = solve_lqr(1, 1, 0, 1, 1, 1.0, 0.0, 0.0, N);
    const MomentSolution sol = lqr_moment_solution(lqr, scheme);

    const ConicProgram prog = assemble(spec, cfg);
    auto value_of = [&](int var) {
      const auto& [n, key] = prog.variables[var];
      return sol.value(n, key);
    };
    for (const auto& eq : prog.equalities) {
      double resid = eq.constant;
      for (const auto& [var, coef] : eq.coeffs) resid += coef * value_of(var);
      CHECK(std::abs(resid) <= 1e-6);
    }
    for (const auto& block : prog.psd_blocks) {
      Eigen::MatrixXd M(block.side, block.side);
      int t = 0;
      for (int col = 0; col < block.side; ++col) {
        for (int row = 0; row <= col; ++row) {
          double v = block.entries[t].constant;
          for (const auto& [var, coef] : block.entries[t].coeffs) {
            v += coef * value_of(var);
          }
          M(row, col) = M(col, row) = v;
          ++t;
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-6);
    }
  }
}

TEST_SUITE_END();
