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

#include "msoc/sim.hpp"

#include <cmath>

#include <doctest.h>

#include "msoc/errors.hpp"
#include "msoc/oracle.hpp"
#include "msoc/problem_file.hpp"

using namespace msoc;

namespace {

PolynomialController linear_policy(double p0, double p1,
                                   const std::vector<double>& grid) {
  PolynomialController ctrl;
  ctrl.order = 1;
  ctrl.grid = grid;
  ctrl.coeffs.assign(grid.size(), {p0, p1});
  return ctrl;
}

std::vector<double> uniform_grid(int N, double T) {
  std::vector<double> g(N + 1);
  for (int n = 0; n <= N; ++n) g[n] = T * n / N;
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("sim");

TEST_CASE("frozen deterministic state gives an exact cost") {
  ProblemSpec spec;
  spec.name = "frozen";
  spec.drift = Polynomial();
  spec.diffusion = Polynomial();
  spec.running_cost = Polynomial::x(2);
  spec.horizon = 1.0;
  spec.x0 = 1.0;

  SimConfig cfg;
  cfg.trials = 50;
  const SimReport report = simulate(spec, nullptr, cfg);
  CHECK(report.mean_cost == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.std_error == 0.0);
  CHECK(report.diverged == 0);
}

TEST_CASE("reports are reproducible and thread-count independent") {
  const ProblemSpec spec = fixture("cubic");
  const PolynomialController ctrl =
      linear_policy(0.2, -0.8, uniform_grid(50, 1.0));
  SimConfig cfg;
  cfg.trials = 1000;
  cfg.record_moments_up_to = 4;

  const SimReport a = simulate(spec, &ctrl, cfg);
  const SimReport b = simulate(spec, &ctrl, cfg);
  CHECK(a.mean_cost == b.mean_cost);
  CHECK(a.std_error == b.std_error);
  CHECK(a.moments == b.moments);

  cfg.parallel = false;
  const SimReport serial = simulate(spec, &ctrl, cfg);
  CHECK(serial.mean_cost == a.mean_cost);
  CHECK(serial.moments == a.moments);

  cfg.parallel = true;
  cfg.seed = 999;
  const SimReport other = simulate(spec, &ctrl, cfg);
  CHECK(other.mean_cost != a.mean_cost);
}

TEST_CASE("disjoint seed batches agree within combined error") {
  const ProblemSpec spec = fixture("cubic");
  const PolynomialController ctrl =
      linear_policy(0.0, -0.5, uniform_grid(50, 1.0));
  SimConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 1;
  const SimReport a = simulate(spec, &ctrl, cfg);
  cfg.seed = 2;
  const SimReport b = simulate(spec, &ctrl, cfg);
  const double combined =
      std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  CHECK(std::abs(a.mean_cost - b.mean_cost) <= 4.0 * combined);
}

TEST_CASE("control clamping") {
  const ProblemSpec fish = fixture("fisheries");  // constraints x >= 0, u >= 0
  CHECK(project_control(-0.3, fish) == 0.0);
  CHECK(project_control(2.0, fish) == 2.0);

  ProblemSpec state_only = fish;
  state_only.constraints = {Polynomial::x()};
  CHECK(project_control(-0.3, state_only) == -0.3);  // not a control bound

  ProblemSpec box = fish;
  // 1 - u >= 0 and u >= 0 gives the box [0, 1].
  box.constraints = {Polynomial::u(),
                     Polynomial(1.0) - Polynomial::u()};
  CHECK(project_control(1.7, box) == 1.0);
  CHECK(project_control(0.4, box) == 0.4);
}

TEST_CASE("clipped simulation respects the bound pathwise") {
  const ProblemSpec fish = fixture("fisheries");
  PolynomialController sell_everything =
      linear_policy(-0.5, 0.3, uniform_grid(20, 1.0));
  SimConfig cfg;
  cfg.trials = 64;
  cfg.clip_controls = true;
  cfg.dump_paths = 8;
  const SimReport report = simulate(fish, &sell_everything, cfg);
  for (const auto& path : report.paths) {
    for (const auto& [t, x, u] : path) CHECK(u >= 0.0);
  }
}

TEST_CASE("divergent dynamics are detected and reported") {
  ProblemSpec spec;
  spec.name = "blowup";
  spec.drift = Polynomial::x(3);
  spec.diffusion = Polynomial();
  spec.running_cost = Polynomial::x(2);
  spec.horizon = 1.0;
  spec.x0 = 2.0;

  SimConfig cfg;
  cfg.trials = 100;
  try {
    simulate(spec, nullptr, cfg);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.diverged_count == 100);
    CHECK(e.first_diverged_trial == 0);
  }
}

TEST_CASE("empirical moments match a known stationary computation") {
  // dx = -x dt + dw from 0: Var x(1) = (1 - e^{-2})/2, E x(1) = 0.
  ProblemSpec spec;
  spec.name = "ou";
  spec.drift = -Polynomial::x();
  spec.diffusion = Polynomial(1.0);
  spec.running_cost = Polynomial::x(2);
  spec.horizon = 1.0;
  spec.x0 = 0.0;

  SimConfig cfg;
  cfg.trials = 20000;
  cfg.record_moments_up_to = 4;
  const SimReport report = simulate(spec, nullptr, cfg);

  REQUIRE(report.moment_grid.size() == 2);  // no controller: ends only
  CHECK(report.moment(0, {0, 0}) == 1.0);
  CHECK(report.moment(1, {0, 0}) == 1.0);
  const double var_T = 0.5 * (1.0 - std::exp(-2.0));
  const double se = *report.moment_se(1, {2, 0});
  CHECK(std::abs(report.moment(1, {2, 0}) - var_T) <= 4.0 * se + 2e-3);
  CHECK(std::abs(report.moment(1, {1, 0})) <=
        4.0 * *report.moment_se(1, {1, 0}));
}

TEST_CASE("weak error shrinks as the step refines") {
  // Integrator under the oracle gain: cost approaches ln(cosh 1) as
  // dt_sim -> 0 with everything else held fixed.
  const ProblemSpec spec = fixture("lqr");
  const LqrSolution lqr = solve_lqr(1, 1, 0, 1, 1, 1.0, 0.0, 0.0, 400);
  PolynomialController ctrl;
  ctrl.order = 1;
  ctrl.grid = lqr.grid;
  for (double L : lqr.L) ctrl.coeffs.push_back({0.0, L});

  const double truth = std::log(std::cosh(1.0));
  SimConfig cfg;
  cfg.trials = 100000;
  cfg.seed = 77;
  cfg.dt_sim = 8e-3;
  const double coarse = simulate(spec, &ctrl, cfg).mean_cost;
  cfg.dt_sim = 1e-3;
  const SimReport fine_report = simulate(spec, &ctrl, cfg);
  const double fine = fine_report.mean_cost;
  CHECK(std::abs(fine - truth) < std::abs(coarse - truth));
  CHECK(std::abs(fine - truth) <= 4.0 * fine_report.std_error + 2e-3);
}

TEST_CASE("empirical moments nearly satisfy the moment ODEs") {
  // Any Markov policy obeys the generator equalities; check the Euler
  // residuals of the first two moment ODEs against MC noise.
  const ProblemSpec spec = fixture("cubic");
  const int N = 100;
  const PolynomialController ctrl =
      linear_policy(0.1, -0.6, uniform_grid(N, 1.0));
  SimConfig cfg;
  cfg.trials = 10000;
  cfg.record_moments_up_to = 10;
  const SimReport rep = simulate(spec, &ctrl, cfg);
  const MomentSystem sys = build_system(2, spec.drift, spec.diffusion);

  const double dt = 1.0 / N;
  for (int k = 1; k <= 2; ++k) {
    for (int n = 0; n < N; n += 7) {
      const double lhs =
          rep.moment(n + 1, {k, 0}) - rep.moment(n, {k, 0});
      double rhs = sys.rhs[k - 1].constant();
      double noise = 0.0;
      for (const auto& [key, coef] : sys.rhs[k - 1].terms()) {
        rhs += coef * rep.moment(n, key);
        if (auto se = rep.moment_se(n, key)) noise += std::abs(coef) * *se;
      }
      const double tol = 5.0 * noise * dt + 20.0 * dt * dt +
                         5.0 * (*rep.moment_se(n, {k, 0}) +
                                *rep.moment_se(n + 1, {k, 0}));
      CHECK(std::abs(lhs - dt * rhs) <= tol);
    }
  }
}

TEST_SUITE_END();
