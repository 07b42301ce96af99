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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "msoc/errors.hpp"
#include "msoc/rng.hpp"

namespace msoc {

namespace {

constexpr double kDivergenceBound = 1e8;
constexpr long long kChunk = 64;

// Dense coefficient table for allocation-free Horner evaluation in the
// per-step hot loop.
struct DensePoly {
  int dx = 0;
  int du = 0;
  std::vector<double> c;  // (dx+1) x (du+1), row-major in u

  explicit DensePoly(const Polynomial& p)
      : dx(p.degree_x()), du(p.degree_u()), c((dx + 1) * (du + 1), 0.0) {
    for (const auto& [key, v] : p.terms()) c[key.j * (dx + 1) + key.i] = v;
  }

  double eval(double x, double u) const {
    double acc = 0.0;
    for (int j = du; j >= 0; --j) {
      const double* row = &c[j * (dx + 1)];
      double hx = 0.0;
      for (int i = dx; i >= 0; --i) hx = hx * x + row[i];
      acc = acc * u + hx;
    }
    return acc;
  }
};

struct ControlBounds {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

// Bounds implied by constraints of the form alpha + beta u >= 0.
ControlBounds control_bounds(const ProblemSpec& spec) {
  ControlBounds bounds;
  for (const auto& b : spec.constraints) {
    if (b.degree_x() != 0 || b.degree_u() != 1) continue;
    const double beta = b.coeff(0, 1);
    const double alpha = b.coeff(0, 0);
    if (beta > 0.0) {
      bounds.lo = std::max(bounds.lo, -alpha / beta);
    } else if (beta < 0.0) {
      bounds.hi = std::min(bounds.hi, -alpha / beta);
    }
  }
  return bounds;
}

std::vector<MomentKey> moment_keys_up_to(int total_degree) {
  std::vector<MomentKey> keys;
  for (int i = 0; i <= total_degree; ++i) {
    for (int j = 0; j + i <= total_degree; ++j) keys.push_back({i, j});
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

double project_control(double u_raw, const ProblemSpec& spec) {
  const ControlBounds bounds = control_bounds(spec);
  return std::clamp(u_raw, bounds.lo, bounds.hi);
}

double SimReport::moment(int grid_index, const MomentKey& key) const {
  const auto it =
      std::lower_bound(moment_keys.begin(), moment_keys.end(), key);
  if (it == moment_keys.end() || !(*it == key)) {
    throw MissingMomentError("empirical moment " + key_name(key) +
                             " was not recorded");
  }
  return moments[grid_index][it - moment_keys.begin()];
}

std::optional<double> SimReport::moment_se(int grid_index,
                                           const MomentKey& key) const {
  const MomentKey sq{2 * key.i, 2 * key.j};
  const auto it = std::lower_bound(moment_keys.begin(), moment_keys.end(), sq);
  if (it == moment_keys.end() || !(*it == sq)) return std::nullopt;
  const long long n = trials - diverged;
  if (n < 2) return std::nullopt;
  const double m1 = moment(grid_index, key);
  const double m2 = moments[grid_index][it - moment_keys.begin()];
  const double var = std::max(0.0, m2 - m1 * m1);
  return std::sqrt(var / static_cast<double>(n));
}

SimReport simulate(const ProblemSpec& spec, const PolynomialController* ctrl,
                   const SimConfig& cfg) {
  spec.validate();
  if (cfg.trials < 1) throw ValidationError("need at least one trial");
  if (!(cfg.dt_sim > 0.0) || cfg.dt_sim > spec.horizon) {
    throw ValidationError("dt_sim must lie in (0, horizon]");
  }

  const DensePoly drift(spec.drift);
  const DensePoly diffusion(spec.diffusion);
  const DensePoly running(spec.running_cost);
  const DensePoly terminal(spec.terminal_cost);
  const ControlBounds bounds =
      cfg.clip_controls ? control_bounds(spec) : ControlBounds{};

  const long long n_steps =
      std::max<long long>(1, std::llround(spec.horizon / cfg.dt_sim));
  const double dt = spec.horizon / static_cast<double>(n_steps);
  const double sqrt_dt = std::sqrt(dt);

  SimReport report;
  report.trials = cfg.trials;
  report.moment_grid = ctrl ? ctrl->grid
                            : std::vector<double>{0.0, spec.horizon};
  report.moment_keys = moment_keys_up_to(cfg.record_moments_up_to);
  const int n_grid = static_cast<int>(report.moment_grid.size());
  const int n_keys = static_cast<int>(report.moment_keys.size());

  // Grid times snap to the nearest simulation step.
  std::vector<long long> record_step(n_grid);
  for (int g = 0; g < n_grid; ++g) {
    record_step[g] = std::clamp<long long>(
        std::llround(report.moment_grid[g] / dt), 0, n_steps);
  }

  const long long n_chunks = (cfg.trials + kChunk - 1) / kChunk;
  const std::size_t moment_len =
      static_cast<std::size_t>(n_grid) * static_cast<std::size_t>(n_keys);

  // Per-chunk partial sums, merged serially in chunk order afterwards, so
  // the reduction is identical for any thread count.
  std::vector<double> chunk_cost(n_chunks, 0.0);
  std::vector<double> chunk_cost_sq(n_chunks, 0.0);
  std::vector<long long> chunk_valid(n_chunks, 0);
  std::vector<std::vector<long long>> chunk_diverged(n_chunks);
  std::vector<double> chunk_moments(n_chunks * moment_len, 0.0);

  if (cfg.keep_trial_costs) report.trial_costs.assign(cfg.trials, 0.0);
  const int n_paths = static_cast<int>(std::min<long long>(
      cfg.dump_paths, cfg.trials));
  report.paths.resize(n_paths);

  const int max_pow = std::max(2, cfg.record_moments_up_to);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
#endif
  for (long long chunk = 0; chunk < n_chunks; ++chunk) {
    const long long begin = chunk * kChunk;
    const long long end = std::min(cfg.trials, begin + kChunk);
    std::vector<double> x_pow(max_pow + 1), u_pow(max_pow + 1);
    double* moment_slot = &chunk_moments[chunk * moment_len];

    for (long long trial = begin; trial < end; ++trial) {
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(trial));
      double x = spec.x0;
      double cost = 0.0;
      bool diverged = false;
      int g = 0;

      auto policy = [&](double t, double state) {
        double u = ctrl ? eval_control(*ctrl, t, state) : 0.0;
        if (cfg.clip_controls) u = std::clamp(u, bounds.lo, bounds.hi);
        return u;
      };
      auto record = [&](int grid_index, double state, double u) {
        x_pow[0] = 1.0;
        u_pow[0] = 1.0;
        for (int p = 1; p <= max_pow; ++p) {
          x_pow[p] = x_pow[p - 1] * state;
          u_pow[p] = u_pow[p - 1] * u;
        }
        for (int k = 0; k < n_keys; ++k) {
          const MomentKey& key = report.moment_keys[k];
          moment_slot[grid_index * n_keys + k] += x_pow[key.i] * u_pow[key.j];
        }
      };

      for (long long step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        const double u = policy(t, x);
        while (g < n_grid && record_step[g] == step) record(g++, x, u);
        if (trial < n_paths) report.paths[trial].push_back({t, x, u});
        cost += running.eval(x, u) * dt;
        const double z = rng.next_normal();
        x += drift.eval(x, u) * dt + diffusion.eval(x, u) * sqrt_dt * z;
        if (!std::isfinite(x) || std::abs(x) > kDivergenceBound) {
          diverged = true;
          break;
        }
      }

      if (diverged) {
        chunk_diverged[chunk].push_back(trial);
        if (trial < n_paths) report.paths[trial].clear();
        continue;
      }
      const double uT = policy(spec.horizon, x);
      while (g < n_grid) record(g++, x, uT);
      if (trial < n_paths) report.paths[trial].push_back({spec.horizon, x, uT});
      cost += terminal.eval(x, 0.0);

      chunk_cost[chunk] += cost;
      chunk_cost_sq[chunk] += cost * cost;
      ++chunk_valid[chunk];
      if (cfg.keep_trial_costs) report.trial_costs[trial] = cost;
    }
  }

  // Fixed-order merge over chunk indices.
  double cost_sum = 0.0, cost_sq_sum = 0.0;
  long long valid = 0;
  std::vector<double> moment_sum(moment_len, 0.0);
  for (long long chunk = 0; chunk < n_chunks; ++chunk) {
    cost_sum += chunk_cost[chunk];
    cost_sq_sum += chunk_cost_sq[chunk];
    valid += chunk_valid[chunk];
    for (long long t : chunk_diverged[chunk]) {
      ++report.diverged;
      if (report.diverged_trials.size() < 32) {
        report.diverged_trials.push_back(t);
      }
    }
    const double* slot = &chunk_moments[chunk * moment_len];
    for (std::size_t k = 0; k < moment_len; ++k) moment_sum[k] += slot[k];
  }

  if (report.diverged > 0 &&
      static_cast<double>(report.diverged) >
          0.01 * static_cast<double>(cfg.trials)) {
    throw DivergenceError(
        "more than 1% of trials diverged (" +
            std::to_string(report.diverged) + " of " +
            std::to_string(cfg.trials) + ", first at trial " +
            std::to_string(report.diverged_trials.front()) + ")",
        report.diverged_trials.front(), report.diverged);
  }
  if (valid == 0) {
    throw DivergenceError("all trials diverged",
                          report.diverged_trials.front(), report.diverged);
  }

  report.mean_cost = cost_sum / static_cast<double>(valid);
  if (valid > 1) {
    const double var =
        std::max(0.0, (cost_sq_sum - cost_sum * cost_sum / valid) /
                          static_cast<double>(valid - 1));
    report.std_error = std::sqrt(var / static_cast<double>(valid));
  }
  report.moments.assign(n_grid, std::vector<double>(n_keys, 0.0));
  for (int g = 0; g < n_grid; ++g) {
    for (int k = 0; k < n_keys; ++k) {
      report.moments[g][k] =
          moment_sum[g * n_keys + k] / static_cast<double>(valid);
    }
  }
  return report;
}

namespace {

void print_full(std::ofstream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_sim_summary_csv(const std::string& path, const SimReport& report) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << "mean_cost,std_error,trials,diverged\n";
  print_full(os, report.mean_cost);
  os << ',';
  print_full(os, report.std_error);
  os << ',' << report.trials << ',' << report.diverged << '\n';
}

void write_sim_moments_csv(const std::string& path, const SimReport& report) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << 't';
  for (const auto& key : report.moment_keys) {
    os << ',' << "mu_x" << key.i << "u" << key.j;
  }
  os << '\n';
  for (std::size_t g = 0; g < report.moment_grid.size(); ++g) {
    print_full(os, report.moment_grid[g]);
    for (double v : report.moments[g]) {
      os << ',';
      print_full(os, v);
    }
    os << '\n';
  }
}

void write_paths_csv(const std::string& path, const SimReport& report) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << "trial,t,x,u\n";
  for (std::size_t trial = 0; trial < report.paths.size(); ++trial) {
    for (const auto& [t, x, u] : report.paths[trial]) {
      os << trial << ',';
      print_full(os, t);
      os << ',';
      print_full(os, x);
      os << ',';
      print_full(os, u);
      os << '\n';
    }
  }
}

}  // namespace msoc
