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

#ifndef MSOC_ORACLE_HPP
#define MSOC_ORACLE_HPP

#include <vector>

#include "msoc/relaxation.hpp"

namespace msoc {

// Closed-form scalar LQR reference for
//   min <int_0^T (q x^2 + r u^2) dt + terminal x_T^2>,
//   dx = (a x + b u) dt + sigma dw,  x(0) = x0.
// Shares no solver or moment-assembly code with the rest of the toolkit so
// agreement with the SDP pipeline is independent evidence.
struct LqrSolution {
  std::vector<double> grid;
  std::vector<double> P;  // Riccati variable
  std::vector<double> s;  // stochastic offset, s(T) = 0
  std::vector<double> L;  // feedback gain u = L x
  double value_at_x0 = 0.0;
  double sigma = 0.0;
  double a = 0.0;
  double b = 0.0;
  double x0 = 0.0;
};

// Backward Riccati integration with a classical fixed-step RK4 scheme:
//   -dP/dt = q + 2 a P - (b^2 / r) P^2,  P(T) = terminal,
//   s(t) = int_t^T sigma^2 P,  L = -(b / r) P,
//   value = P(0) x0^2 + s(0).
LqrSolution solve_lqr(double q, double r, double a, double b, double sigma,
                      double T, double x0, double terminal, int steps);

// The optimal point of the corresponding moment program on the LQR grid:
// mu^x = mu^u = 0, mu^{x^2} from the discretized variance recursion,
// mu^{xu} = L mu^{x^2}, mu^{u^2} = L^2 mu^{x^2}. With x0 = 0 this satisfies
// the assembled d_x = d_u = 1 program constraints exactly for the matching
// scheme.
MomentSolution lqr_moment_solution(const LqrSolution& lqr,
                                   Scheme scheme = Scheme::kEuler);

}  // namespace msoc

#endif  // MSOC_ORACLE_HPP
