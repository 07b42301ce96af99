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

#ifndef MSOC_RELAXATION_HPP
#define MSOC_RELAXATION_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "msoc/conic.hpp"
#include "msoc/program.hpp"

namespace msoc {

// The control problem: minimize (or maximize) the expected running plus
// terminal cost of dx = f dt + g dw subject to b_l(x, u) >= 0.
struct ProblemSpec {
  Polynomial drift;          // f(x, u)
  Polynomial diffusion;      // g(x, u)
  Polynomial running_cost;   // c(x, u)
  Polynomial terminal_cost;  // h(x), no u dependence
  std::vector<Polynomial> constraints;  // b_l(x, u) >= 0
  double horizon = 1.0;                 // T
  double x0 = 0.0;
  bool maximize = false;
  std::string name;

  // Throws ValidationError on horizon <= 0 or a u-dependent terminal cost.
  void validate() const;
};

enum class Scheme { kEuler, kTrapezoid };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& s);

struct RelaxationConfig {
  int d_x = 3;
  int d_u = 1;
  int K = 0;               // 0 requests auto sizing
  std::vector<int> r;      // empty requests auto sizing
  int N = 100;             // time steps
  Scheme scheme = Scheme::kEuler;
};

struct MomentSolution {
  std::vector<double> grid;          // N+1 time points
  std::vector<MomentKey> keys;       // variable keys per grid point, sorted
  std::map<std::pair<int, MomentKey>, double> values;
  double objective_value = 0.0;      // sign restored for maximize problems
  SolveStatus status = SolveStatus::kOptimal;
  Residuals residuals;

  // (0,0) always evaluates to 1.
  double value(int time_index, const MomentKey& key) const;
  bool has(int time_index, const MomentKey& key) const;
};

// Resolved sizing for a (spec, config) pair: auto_size unless the config
// carries explicit K / r overrides, which are validated instead.
SizingResult resolve_sizing(const ProblemSpec& spec,
                            const RelaxationConfig& cfg);

// Time-discretized conic program: quadrature objective, per-step moment
// dynamics equalities, initial conditions, constraint-power inequalities,
// and one PSD moment matrix per grid point.
ConicProgram assemble(const ProblemSpec& spec, const RelaxationConfig& cfg);

// Moment-linearization of b_l^r: each monomial x^a u^b becomes mu^{x^a u^b}.
LinearMomentExpr expand_constraint_moment(const Polynomial& b_l, int r);

// Assembles, scales, solves, and unpacks the moment trajectories. Throws
// SolverError (with residuals) when the conic solve does not converge.
MomentSolution solve_relaxation(const ProblemSpec& spec,
                                const RelaxationConfig& cfg,
                                const SolverOptions& opts = {});

// Tail quadrature of the running cost plus terminal cost, one value per grid
// point; the value at t = 0 equals objective_value exactly.
std::vector<std::pair<double, double>> cost_to_go(const MomentSolution& sol,
                                                  const ProblemSpec& spec,
                                                  const RelaxationConfig& cfg);

// Quadrature weights for the running-cost integral on an N-step grid.
std::vector<double> quadrature_weights(int N, double dt, Scheme scheme);

}  // namespace msoc

#endif  // MSOC_RELAXATION_HPP
