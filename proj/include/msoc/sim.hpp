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

#ifndef MSOC_SIM_HPP
#define MSOC_SIM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msoc/extract.hpp"
#include "msoc/relaxation.hpp"

namespace msoc {

struct SimConfig {
  long long trials = 2000;
  double dt_sim = 1e-3;
  std::uint64_t seed = 12345;
  bool clip_controls = false;
  // Record empirical moments mu^{x^i u^j} for all i + j <= this total degree.
  int record_moments_up_to = 0;
  bool parallel = true;
  bool keep_trial_costs = false;
  int dump_paths = 0;  // record (t, x, u) for the first this-many trials
};

struct SimReport {
  double mean_cost = 0.0;
  double std_error = 0.0;
  long long trials = 0;     // requested
  long long diverged = 0;   // excluded from all averages
  std::vector<long long> diverged_trials;  // first few indices

  std::vector<double> moment_grid;
  std::vector<MomentKey> moment_keys;
  std::vector<std::vector<double>> moments;  // [grid point][key]

  std::vector<double> trial_costs;                          // optional
  std::vector<std::vector<std::array<double, 3>>> paths;    // optional t,x,u

  double moment(int grid_index, const MomentKey& key) const;
  // Monte Carlo standard error of a recorded moment; needs (2i, 2j) recorded.
  std::optional<double> moment_se(int grid_index, const MomentKey& key) const;
};

// Euler-Maruyama Monte Carlo of dx = f dt + g dw under the given feedback
// (nullptr means u = 0). Trials use a counter-based RNG keyed by
// (seed, trial) and a fixed-order chunked reduction, so the report is
// bit-identical for any thread count. Throws DivergenceError when more than
// 1% of trials leave |x| <= 1e8.
SimReport simulate(const ProblemSpec& spec, const PolynomialController* ctrl,
                   const SimConfig& cfg);

// Clamp of the raw control into the interval implied by the constraints that
// are linear in u alone (state-dependent constraints are not enforced).
double project_control(double u_raw, const ProblemSpec& spec);

void write_sim_summary_csv(const std::string& path, const SimReport& report);
void write_sim_moments_csv(const std::string& path, const SimReport& report);
void write_paths_csv(const std::string& path, const SimReport& report);

}  // namespace msoc

#endif  // MSOC_SIM_HPP
