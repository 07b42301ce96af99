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

#include "msoc/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "msoc/errors.hpp"

namespace msoc {

void ProblemSpec::validate() const {
  if (!(horizon > 0.0)) {
    throw ValidationError("horizon must be positive, got " +
                          std::to_string(horizon));
  }
  if (terminal_cost.degree_u() > 0) {
    throw ValidationError("terminal cost must not depend on the control");
  }
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::kEuler ? "euler" : "trapezoid";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "euler") return Scheme::kEuler;
  if (s == "trapezoid") return Scheme::kTrapezoid;
  throw ValidationError("unknown scheme '" + s + "'");
}

double MomentSolution::value(int time_index, const MomentKey& key) const {
  if (key.i == 0 && key.j == 0) return 1.0;
  auto it = values.find({time_index, key});
  if (it == values.end()) {
    throw MissingMomentError("moment " + key_name(key) + " at grid index " +
                             std::to_string(time_index) + " not computed");
  }
  return it->second;
}

bool MomentSolution::has(int time_index, const MomentKey& key) const {
  if (key.i == 0 && key.j == 0) return true;
  return values.contains({time_index, key});
}

SizingResult resolve_sizing(const ProblemSpec& spec,
                            const RelaxationConfig& cfg) {
  const SizingResult largest = auto_size(cfg.d_x, cfg.d_u, spec.drift,
                                         spec.diffusion, spec.constraints);
  SizingResult result = largest;
  if (cfg.K > 0) {
    if (cfg.K > largest.K) {
      throw SizingError("K=" + std::to_string(cfg.K) +
                        " needs moments outside the moment matrix (largest "
                        "admissible K is " +
                        std::to_string(largest.K) + ")");
    }
    result.K = cfg.K;
  }
  if (!cfg.r.empty()) {
    if (cfg.r.size() != spec.constraints.size()) {
      throw SizingError("expected " +
                        std::to_string(spec.constraints.size()) +
                        " constraint powers, got " +
                        std::to_string(cfg.r.size()));
    }
    for (std::size_t l = 0; l < cfg.r.size(); ++l) {
      if (cfg.r[l] < 1 || cfg.r[l] > largest.r[l]) {
        throw SizingError("constraint power r_" + std::to_string(l + 1) +
                          "=" + std::to_string(cfg.r[l]) +
                          " outside admissible range [1, " +
                          std::to_string(largest.r[l]) + "]");
      }
    }
    result.r = cfg.r;
  }
  return result;
}

LinearMomentExpr expand_constraint_moment(const Polynomial& b_l, int r) {
  return linearize(b_l.pow(r));
}

std::vector<double> quadrature_weights(int N, double dt, Scheme scheme) {
  std::vector<double> w(N + 1, dt);
  if (scheme == Scheme::kEuler) {
    w[N] = 0.0;  // left-endpoint Riemann sum
  } else {
    w[0] = 0.5 * dt;
    w[N] = 0.5 * dt;
  }
  return w;
}

namespace {

class VariableTable {
 public:
  VariableTable(int d_x, int d_u, int N) : N_(N) {
    for (const auto& key : matrix_index_set(d_x, d_u)) {
      if (key.i == 0 && key.j == 0) continue;
      keys_.push_back(key);
    }
    std::sort(keys_.begin(), keys_.end());
    for (std::size_t p = 0; p < keys_.size(); ++p) pos_[keys_[p]] = p;
  }

  int count() const { return static_cast<int>(keys_.size()) * (N_ + 1); }
  const std::vector<MomentKey>& keys() const { return keys_; }

  int index(int n, const MomentKey& key) const {
    auto it = pos_.find(key);
    if (it == pos_.end()) {
      throw DegreeError("moment " + key_name(key) +
                        " lies outside the moment matrix");
    }
    return n * static_cast<int>(keys_.size()) + static_cast<int>(it->second);
  }

 private:
  int N_;
  std::vector<MomentKey> keys_;
  std::map<MomentKey, std::size_t> pos_;
};

// Accumulates (variable, coefficient) pairs with duplicate merging.
class RowBuilder {
 public:
  void add(int var, double coef) {
    if (coef != 0.0) acc_[var] += coef;
  }
  void add_constant(double c) { constant_ += c; }

  // expr evaluated at grid point n, multiplied by factor.
  void add_expr(const VariableTable& vars, const LinearMomentExpr& expr, int n,
                double factor) {
    for (const auto& [key, c] : expr.terms()) {
      add(vars.index(n, key), factor * c);
    }
    add_constant(factor * expr.constant());
  }

  AffineExpr take() {
    AffineExpr expr;
    expr.constant = constant_;
    expr.coeffs.reserve(acc_.size());
    for (const auto& [var, coef] : acc_) {
      if (coef != 0.0) expr.coeffs.emplace_back(var, coef);
    }
    acc_.clear();
    constant_ = 0.0;
    return expr;
  }

 private:
  std::map<int, double> acc_;
  double constant_ = 0.0;
};

}  // namespace

ConicProgram assemble(const ProblemSpec& spec, const RelaxationConfig& cfg) {
  spec.validate();
  if (cfg.N < 2) throw ValidationError("need at least 2 time steps");
  const SizingResult sizing = resolve_sizing(spec, cfg);
  const MomentSystem system =
      build_system(sizing.K, spec.drift, spec.diffusion);
  const VariableTable vars(cfg.d_x, cfg.d_u, cfg.N);
  const int N = cfg.N;
  const double dt = spec.horizon / N;

  ConicProgram prog;
  prog.num_vars = vars.count();
  for (int n = 0; n <= N; ++n) {
    for (const auto& key : vars.keys()) prog.variables.emplace_back(n, key);
  }

  // Objective: quadrature of the running cost plus the terminal cost,
  // negated for maximization problems.
  const LinearMomentExpr running = linearize(spec.running_cost);
  const LinearMomentExpr terminal = linearize(spec.terminal_cost);
  const std::vector<double> w = quadrature_weights(N, dt, cfg.scheme);
  const double sign = spec.maximize ? -1.0 : 1.0;
  {
    RowBuilder row;
    for (int n = 0; n <= N; ++n) {
      if (w[n] != 0.0) row.add_expr(vars, running, n, sign * w[n]);
    }
    row.add_expr(vars, terminal, N, sign);
    prog.objective = row.take();
  }

  // Initial conditions mu_0^{x^k} = x0^k, then the discretized dynamics.
  RowBuilder row;
  for (int k = 1; k <= sizing.K; ++k) {
    row.add(vars.index(0, {k, 0}), 1.0);
    row.add_constant(-std::pow(spec.x0, k));
    prog.equalities.push_back(row.take());
  }
  for (int n = 0; n < N; ++n) {
    for (int k = 1; k <= sizing.K; ++k) {
      const LinearMomentExpr& rhs = system.rhs[k - 1];
      row.add(vars.index(n + 1, {k, 0}), 1.0);
      row.add(vars.index(n, {k, 0}), -1.0);
      if (cfg.scheme == Scheme::kEuler) {
        row.add_expr(vars, rhs, n, -dt);
      } else {
        row.add_expr(vars, rhs, n, -0.5 * dt);
        row.add_expr(vars, rhs, n + 1, -0.5 * dt);
      }
      prog.equalities.push_back(row.take());
    }
  }

  for (std::size_t l = 0; l < spec.constraints.size(); ++l) {
    for (int power = 1; power <= sizing.r[l]; ++power) {
      const LinearMomentExpr expanded =
          expand_constraint_moment(spec.constraints[l], power);
      for (int n = 0; n <= N; ++n) {
        row.add_expr(vars, expanded, n, 1.0);
        prog.inequalities.push_back(row.take());
      }
    }
  }

  const auto basis = matrix_basis(cfg.d_x, cfg.d_u);
  const int side = static_cast<int>(basis.size());
  for (int n = 0; n <= N; ++n) {
    PsdBlock block;
    block.time_index = n;
    block.side = side;
    for (int col = 0; col < side; ++col) {
      for (int r = 0; r <= col; ++r) {
        const MomentKey key{basis[r].i + basis[col].i,
                            basis[r].j + basis[col].j};
        AffineExpr entry;
        if (key.i == 0 && key.j == 0) {
          entry.constant = 1.0;
        } else {
          entry.coeffs.emplace_back(vars.index(n, key), 1.0);
        }
        block.entries.push_back(std::move(entry));
      }
    }
    prog.psd_blocks.push_back(std::move(block));
  }

  // Diagonal scaling by powers of |x0| keeps high moments near unit size.
  prog.var_scales.reserve(prog.num_vars);
  for (const auto& [n, key] : prog.variables) {
    prog.var_scales.push_back(std::max(1.0, std::pow(std::abs(spec.x0),
                                                     key.i)));
  }
  return prog;
}

namespace {

// Backward tail quadrature; index 0 equals the full objective by
// construction.
std::vector<double> cost_profile(const MomentSolution& sol,
                                 const ProblemSpec& spec,
                                 const RelaxationConfig& cfg) {
  const int N = cfg.N;
  const double dt = spec.horizon / N;
  const LinearMomentExpr running = linearize(spec.running_cost);
  const LinearMomentExpr terminal = linearize(spec.terminal_cost);
  auto at = [&](const LinearMomentExpr& e, int n) {
    return e.evaluate([&](const MomentKey& key) { return sol.value(n, key); });
  };
  std::vector<double> ctg(N + 1);
  ctg[N] = at(terminal, N);
  for (int n = N - 1; n >= 0; --n) {
    if (cfg.scheme == Scheme::kEuler) {
      ctg[n] = ctg[n + 1] + dt * at(running, n);
    } else {
      ctg[n] = ctg[n + 1] + 0.5 * dt * (at(running, n) + at(running, n + 1));
    }
  }
  return ctg;
}

}  // namespace

MomentSolution solve_relaxation(const ProblemSpec& spec,
                                const RelaxationConfig& cfg,
                                const SolverOptions& opts) {
  const ConicProgram prog = assemble(spec, cfg);
  auto [sf, maps] = to_standard_form(prog);
  const ConicSolution conic = solve(sf, opts);
  if (conic.status != SolveStatus::kOptimal) {
    throw SolverError("conic solve did not converge within " +
                          std::to_string(opts.max_iters) + " iterations",
                      conic.residuals.primal, conic.residuals.dual,
                      conic.residuals.gap);
  }

  MomentSolution sol;
  sol.status = conic.status;
  sol.residuals = conic.residuals;
  const int N = cfg.N;
  sol.grid.resize(N + 1);
  for (int n = 0; n <= N; ++n) sol.grid[n] = spec.horizon * n / N;
  for (int idx = 0; idx < prog.num_vars; ++idx) {
    const auto& [n, key] = prog.variables[idx];
    sol.values[{n, key}] = maps.var_scales[idx] * conic.x[idx];
  }
  for (const auto& key : matrix_index_set(cfg.d_x, cfg.d_u)) {
    if (key.i == 0 && key.j == 0) continue;
    sol.keys.push_back(key);
  }
  sol.objective_value = cost_profile(sol, spec, cfg)[0];
  return sol;
}

std::vector<std::pair<double, double>> cost_to_go(const MomentSolution& sol,
                                                  const ProblemSpec& spec,
                                                  const RelaxationConfig& cfg) {
  const std::vector<double> ctg = cost_profile(sol, spec, cfg);
  std::vector<std::pair<double, double>> out;
  out.reserve(ctg.size());
  for (std::size_t n = 0; n < ctg.size(); ++n) {
    out.emplace_back(sol.grid[n], ctg[n]);
  }
  return out;
}

}  // namespace msoc
