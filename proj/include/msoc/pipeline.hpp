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

#ifndef MSOC_PIPELINE_HPP
#define MSOC_PIPELINE_HPP

#include <string>
#include <vector>

#include "msoc/extract.hpp"
#include "msoc/problem_file.hpp"
#include "msoc/sim.hpp"

namespace msoc {

inline constexpr const char* kToolVersion = "0.1.0";

struct PipelineOptions {
  RelaxationConfig relax;
  SolverOptions solver;
  int n_p = 3;
  int m = -1;  // -1 means m = n_p
  Interp interp = Interp::kLinear;
  SimConfig sim;
  std::string out_dir = "msoc_run";
};

struct PipelineResult {
  double v_sdp = 0.0;
  double v_p = 0.0;
  double std_error = 0.0;
  SizingResult sizing;
  MomentSolution solution;
  PolynomialController controller;
  SimReport report;
};

// Solve, extract, simulate; write manifest.json, moments.csv,
// cost_to_go.csv, controller.csv, sim_summary.csv, and bounds.csv under
// opts.out_dir.
PipelineResult run_pipeline(const ProblemSpec& spec,
                            const PipelineOptions& opts);

// Everything needed to bit-reproduce a run: resolved configuration, the
// problem itself, tool version, and an input digest.
std::string manifest_json(const ProblemSpec& spec, const PipelineOptions& opts,
                          const SizingResult& sizing);
std::pair<ProblemSpec, PipelineOptions> read_manifest(const std::string& path);

struct SweepRow {
  int d_x = 0;
  int d_u = 0;
  int K = 0;
  double v_sdp = 0.0;
  double v_p = 0.0;
  double wall_time_s = 0.0;
  std::string status;  // "ok" or the error kind
};

// One pipeline run per d_x (under out_dir/dx<d>/), consolidated into
// sweep.csv. Per-size failures are recorded and the sweep continues.
std::vector<SweepRow> sweep(const ProblemSpec& spec,
                            const std::vector<int>& d_x_list,
                            const PipelineOptions& base);

std::string to_string(Interp interp);
Interp interp_from_string(const std::string& s);

}  // namespace msoc

#endif  // MSOC_PIPELINE_HPP
