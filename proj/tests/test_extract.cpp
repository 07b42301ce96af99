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

#include "msoc/extract.hpp"

#include <cmath>
#include <filesystem>
#include <random>

#include <doctest.h>

#include "msoc/errors.hpp"
#include "msoc/oracle.hpp"
#include "msoc/problem_file.hpp"

using namespace msoc;

namespace {

// Moments of N(mean, var) via the recursion M_k = mean M_{k-1}
// + (k-1) var M_{k-2}; the controller u = p0 + p1 x then fixes the mixed
// moments exactly. This is the test's independent oracle.
MomentSolution gaussian_policy_moments(double p0, double p1, int points,
                                       int max_power) {
  MomentSolution sol;
  for (int i = 1; i <= max_power + 1; ++i) sol.keys.push_back({i, 0});
  for (int k = 0; k <= max_power; ++k) sol.keys.push_back({k, 1});
  for (int n = 0; n < points; ++n) {
    sol.grid.push_back(n / std::max(1.0, points - 1.0));
    const double mean = 0.3 + 0.1 * n;
    const double var = 0.5 + 0.07 * n;
    std::vector<double> M(max_power + 2);
    M[0] = 1.0;
    M[1] = mean;
    for (int k = 2; k < static_cast<int>(M.size()); ++k) {
      M[k] = mean * M[k - 1] + (k - 1) * var * M[k - 2];
    }
    for (int i = 1; i <= max_power + 1; ++i) sol.values[{n, {i, 0}}] = M[i];
    for (int k = 0; k <= max_power; ++k) {
      sol.values[{n, {k, 1}}] = p0 * M[k] + p1 * M[k + 1];
    }
  }
  return sol;
}

}  // namespace

TEST_SUITE_BEGIN("extract");

TEST_CASE("exact recovery from synthetic Gaussian moments") {
  const MomentSolution sol = gaussian_policy_moments(0.5, -1.0, 9, 3);
  for (int m : {1, 2, 3}) {
    const PolynomialController ctrl = extract_controller(sol, 1, m);
    for (const auto& coeffs : ctrl.coeffs) {
      CHECK(coeffs[0] == doctest::Approx(0.5).epsilon(1e-8));
      CHECK(coeffs[1] == doctest::Approx(-1.0).epsilon(1e-8));
    }
  }
  // Asking for an order-2 fit of a linear policy zeroes the quadratic term.
  const PolynomialController quad = extract_controller(sol, 2, 2);
  for (const auto& coeffs : quad.coeffs) {
    CHECK(coeffs[2] == doctest::Approx(0.0).epsilon(1e-7));
  }
}

TEST_CASE("least-squares residual beats random perturbations") {
  const MomentSolution sol = gaussian_policy_moments(0.2, -0.7, 5, 3);
  const int n_p = 1, m = 3;
  const PolynomialController ctrl = extract_controller(sol, n_p, m);

  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int n = 0; n < 5; ++n) {
    auto residual = [&](const std::vector<double>& p) {
      double r2 = 0.0;
      for (int k = 0; k <= m; ++k) {
        double lhs = 0.0;
        for (int c = 0; c <= n_p; ++c) {
          lhs += p[c] * sol.value(n, {k + c, 0});
        }
        const double diff = lhs - sol.value(n, {k, 1});
        r2 += diff * diff;
      }
      return r2;
    };
    const double base = residual(ctrl.coeffs[n]);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> perturbed = ctrl.coeffs[n];
      for (double& c : perturbed) c += noise(rng);
      CHECK(base <= residual(perturbed) + 1e-12);
    }
  }
}

TEST_CASE("missing moments are reported") {
  const MomentSolution sol = gaussian_policy_moments(0.5, -1.0, 3, 2);
  CHECK_THROWS_AS(extract_controller(sol, 4, 4), MissingMomentError);
}

TEST_CASE("serial and parallel extraction agree exactly") {
  const MomentSolution sol = gaussian_policy_moments(0.1, -0.4, 33, 3);
  const PolynomialController a = extract_controller(sol, 2, 3, Interp::kLinear,
                                                    /*parallel=*/false);
  const PolynomialController b = extract_controller(sol, 2, 3, Interp::kLinear,
                                                    /*parallel=*/true);
  REQUIRE(a.coeffs.size() == b.coeffs.size());
  for (std::size_t n = 0; n < a.coeffs.size(); ++n) {
    for (int c = 0; c <= 2; ++c) CHECK(a.coeffs[n][c] == b.coeffs[n][c]);
  }
}

TEST_CASE("controller evaluation and interpolation") {
  PolynomialController ctrl;
  ctrl.order = 1;
  ctrl.grid = {0.0, 0.5, 1.0};
  ctrl.coeffs = {{1.0, 0.0}, {2.0, 1.0}, {4.0, 3.0}};

  SUBCASE("constant coefficients are constant everywhere") {
    PolynomialController flat;
    flat.order = 2;
    flat.grid = {0.0, 1.0};
    flat.coeffs = {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    for (double t : {0.0, 0.3, 1.0}) {
      for (double x : {-2.0, 0.0, 5.0}) CHECK(eval_control(flat, t, x) == 1.0);
    }
  }
  SUBCASE("grid points return stored coefficients") {
    ctrl.interpolation = Interp::kLinear;
    CHECK(eval_control(ctrl, 0.5, 2.0) == doctest::Approx(4.0));  // 2 + 1*2
    CHECK(eval_control(ctrl, 1.0, 1.0) == doctest::Approx(7.0));
  }
  SUBCASE("midpoints average the neighbors in linear mode") {
    ctrl.interpolation = Interp::kLinear;
    // Halfway between (2,1) and (4,3): coefficients (3,2).
    CHECK(eval_control(ctrl, 0.75, 2.0) == doctest::Approx(3.0 + 2.0 * 2.0));
  }
  SUBCASE("hold uses the previous grid point") {
    ctrl.interpolation = Interp::kHold;
    CHECK(eval_control(ctrl, 0.75, 2.0) == doctest::Approx(4.0));
    CHECK(eval_control(ctrl, 0.49, 2.0) == doctest::Approx(1.0));
  }
  SUBCASE("queries outside the grid clamp to the endpoints") {
    ctrl.interpolation = Interp::kLinear;
    CHECK(eval_control(ctrl, -1.0, 1.0) == doctest::Approx(1.0));
    CHECK(eval_control(ctrl, 2.0, 1.0) == doctest::Approx(7.0));
  }
}

TEST_CASE("controller CSV round trip") {
  PolynomialController ctrl;
  ctrl.order = 2;
  ctrl.grid = {0.0, 0.25, 0.5};
  ctrl.coeffs = {{0.1, -1.0, 3.0}, {0.2, -0.9, 2.5}, {0.3, -0.8, 2.0}};
  const std::string path =
      (std::filesystem::temp_directory_path() / "msoc_ctrl_test.csv").string();
  write_controller_csv(path, ctrl);
  const PolynomialController reread = read_controller_csv(path);
  CHECK(reread.order == ctrl.order);
  CHECK(reread.grid == ctrl.grid);
  CHECK(reread.coeffs == ctrl.coeffs);
  std::filesystem::remove(path);
}

TEST_CASE("gains recovered from the solved integrator match the oracle") {
  const ProblemSpec spec = fixture("lqr");
  RelaxationConfig cfg;
  cfg.d_x = 1;
  cfg.d_u = 1;
  cfg.N = 100;
  const MomentSolution sol = solve_relaxation(spec, cfg, {});
  const PolynomialController ctrl = extract_controller(sol, 1, 1);
  const LqrSolution lqr = solve_lqr(1, 1, 0, 1, 1, 1.0, 0.0, 0.0, cfg.N);

  // Interior 90% of the grid; the variance vanishes at t = 0 so the gain
  // there is unidentifiable by construction.
  for (int n = 5; n <= 95; ++n) {
    CHECK(std::abs(ctrl.coeffs[n][1] - lqr.L[n]) <= 2e-2);
    CHECK(std::abs(ctrl.coeffs[n][0]) <= 2e-2);
  }
}

TEST_SUITE_END();
