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

#include <array>
#include <cmath>
#include <stdexcept>

namespace msoc {

LqrSolution solve_lqr(double q, double r, double a, double b, double sigma,
                      double T, double x0, double terminal, int steps) {
  if (!(r > 0.0)) throw std::invalid_argument("control weight r must be > 0");
  if (steps < 10) throw std::invalid_argument("need at least 10 steps");

  // Integrate in reversed time tau = T - t so both equations run forward:
  //   dP/dtau = q + 2 a P - (b^2 / r) P^2,   P(tau=0) = terminal
  //   ds/dtau = sigma^2 P,                   s(tau=0) = 0.
  const double ht = T / steps;
  auto deriv = [&](const std::array<double, 2>& y) {
    return std::array<double, 2>{q + 2.0 * a * y[0] - (b * b / r) * y[0] * y[0],
                                 sigma * sigma * y[0]};
  };

  std::vector<double> P_rev(steps + 1), s_rev(steps + 1);
  std::array<double, 2> y{terminal, 0.0};
  P_rev[0] = y[0];
  s_rev[0] = y[1];
  for (int k = 0; k < steps; ++k) {
    const auto k1 = deriv(y);
    const auto k2 = deriv({y[0] + 0.5 * ht * k1[0], y[1] + 0.5 * ht * k1[1]});
    const auto k3 = deriv({y[0] + 0.5 * ht * k2[0], y[1] + 0.5 * ht * k2[1]});
    const auto k4 = deriv({y[0] + ht * k3[0], y[1] + ht * k3[1]});
    y[0] += ht / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    y[1] += ht / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    P_rev[k + 1] = y[0];
    s_rev[k + 1] = y[1];
  }

  LqrSolution sol;
  sol.sigma = sigma;
  sol.a = a;
  sol.b = b;
  sol.grid.resize(steps + 1);
  sol.P.resize(steps + 1);
  sol.s.resize(steps + 1);
  sol.L.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    sol.grid[i] = T * i / steps;
    sol.P[i] = P_rev[steps - i];
    sol.s[i] = s_rev[steps - i];
    sol.L[i] = -(b / r) * sol.P[i];
  }
  sol.value_at_x0 = sol.P[0] * x0 * x0 + sol.s[0];
  sol.x0 = x0;
  return sol;
}

MomentSolution lqr_moment_solution(const LqrSolution& lqr, Scheme scheme) {
  const int N = static_cast<int>(lqr.grid.size()) - 1;
  const double dt = lqr.grid.back() / N;
  const double sig2 = lqr.sigma * lqr.sigma;

  // Under u = L x the mixed moments collapse onto the state moments:
  // <xu> = L <x^2>, <u> = L <x>, <u^2> = L^2 <x^2>. The first two state
  // moments follow the closed recursions of the discretized dynamics, so
  // the trajectory satisfies the assembled program equalities exactly.
  std::vector<double> mean(N + 1), var(N + 1);
  mean[0] = lqr.x0;
  var[0] = lqr.x0 * lqr.x0;
  for (int n = 0; n < N; ++n) {
    const double gn = lqr.a + lqr.b * lqr.L[n];
    const double gn1 = lqr.a + lqr.b * lqr.L[n + 1];
    if (scheme == Scheme::kEuler) {
      mean[n + 1] = mean[n] + dt * gn * mean[n];
      var[n + 1] = var[n] + dt * (2.0 * gn * var[n] + sig2);
    } else {
      mean[n + 1] = mean[n] * (1.0 + 0.5 * dt * gn) / (1.0 - 0.5 * dt * gn1);
      var[n + 1] = (var[n] * (1.0 + dt * gn) + dt * sig2) / (1.0 - dt * gn1);
    }
  }

  MomentSolution sol;
  sol.grid = lqr.grid;
  sol.keys = {{1, 0}, {2, 0}, {0, 1}, {1, 1}, {0, 2}};
  for (int n = 0; n <= N; ++n) {
    const double L = lqr.L[n];
    sol.values[{n, {1, 0}}] = mean[n];
    sol.values[{n, {2, 0}}] = var[n];
    sol.values[{n, {0, 1}}] = L * mean[n];
    sol.values[{n, {1, 1}}] = L * var[n];
    sol.values[{n, {0, 2}}] = L * L * var[n];
  }
  sol.objective_value = lqr.value_at_x0;
  sol.status = SolveStatus::kOptimal;
  return sol;
}

}  // namespace msoc
