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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msoc/errors.hpp"
#include "msoc/pipeline.hpp"
#include "msoc/program_io.hpp"

namespace {

using namespace msoc;

// Exit codes: 0 success, 2 parse/validation, 3 sizing, 4 solver,
// 5 simulation.
constexpr int kExitParse = 2;
constexpr int kExitSizing = 3;
constexpr int kExitSolver = 4;
constexpr int kExitSim = 5;

struct CommonArgs {
  std::string problem;
  int d_x = 3;
  int d_u = 1;
  int K = 0;
  std::vector<int> r;
  int steps = 100;
  std::string scheme = "euler";
  int n_p = 3;
  int m = -1;
  std::string interp = "linear";
  long long trials = 2000;
  double dt_sim = 1e-3;
  std::uint64_t seed = 12345;
  double tol = 1e-6;
  int max_iters = 50000;
  bool clip_controls = false;
  int dump_paths = 0;
  std::string out = "msoc_run";
  std::string dump_program;
  bool serial = false;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--problem", args.problem,
                  "problem file path or fixture name (lqr, cubic, fisheries)")
      ->required();
  cmd->add_option("--dx", args.d_x, "state powers in the moment matrix");
  cmd->add_option("--du", args.d_u, "control powers in the moment matrix");
  cmd->add_option("--K", args.K, "moment equation count (default: auto)");
  cmd->add_option("--r", args.r,
                  "constraint powers, one per constraint (default: auto)");
  cmd->add_option("--steps", args.steps, "time steps N");
  cmd->add_option("--scheme", args.scheme, "euler | trapezoid");
  cmd->add_option("--np", args.n_p, "controller polynomial order");
  cmd->add_option("--m", args.m, "least-squares rows minus one (default: np)");
  cmd->add_option("--interp", args.interp, "hold | linear");
  cmd->add_option("--trials", args.trials, "Monte Carlo trials");
  cmd->add_option("--dt-sim", args.dt_sim, "simulation step size");
  cmd->add_option("--seed", args.seed, "Monte Carlo seed");
  cmd->add_option("--tol", args.tol, "solver tolerance");
  cmd->add_option("--max-iters", args.max_iters, "solver iteration cap");
  cmd->add_flag("--clip-controls", args.clip_controls,
                "clamp simulated controls into constraint-implied bounds");
  cmd->add_option("--paths", args.dump_paths,
                  "dump (t,x,u) paths for the first N trials");
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--dump-program", args.dump_program,
                  "also export the assembled conic program to this file");
  cmd->add_flag("--serial", args.serial, "disable OpenMP parallel kernels");
  cmd->add_flag("--verbose", args.verbose, "print solver progress");
}

PipelineOptions to_options(const CommonArgs& args) {
  PipelineOptions opts;
  opts.relax.d_x = args.d_x;
  opts.relax.d_u = args.d_u;
  opts.relax.K = args.K;
  opts.relax.r = args.r;
  opts.relax.N = args.steps;
  opts.relax.scheme = scheme_from_string(args.scheme);
  opts.solver.eps_primal = args.tol;
  opts.solver.eps_dual = args.tol;
  opts.solver.eps_gap = args.tol;
  opts.solver.max_iters = args.max_iters;
  opts.solver.parallel = !args.serial;
  opts.solver.verbose = args.verbose;
  opts.n_p = args.n_p;
  opts.m = args.m;
  opts.interp = interp_from_string(args.interp);
  opts.sim.trials = args.trials;
  opts.sim.dt_sim = args.dt_sim;
  opts.sim.seed = args.seed;
  opts.sim.clip_controls = args.clip_controls;
  opts.sim.dump_paths = args.dump_paths;
  opts.sim.parallel = !args.serial;
  opts.out_dir = args.out;
  return opts;
}

void write_error_record(const std::string& out_dir, const std::string& kind,
                        const std::string& message) {
  nlohmann::json doc;
  doc["error"] = kind;
  doc["message"] = message;
  std::fprintf(stderr, "%s\n", doc.dump().c_str());
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!ec) {
    std::ofstream os(std::filesystem::path(out_dir) / "error.json");
    if (os) os << doc.dump(2) << '\n';
  }
}

int run_solve(const CommonArgs& args) {
  const ProblemSpec spec = load_problem(args.problem);
  const PipelineOptions opts = to_options(args);
  if (!args.dump_program.empty()) {
    write_program_file(args.dump_program, assemble(spec, opts.relax));
  }
  const PipelineResult result = run_pipeline(spec, opts);
  const char* bound_kind = spec.maximize ? "upper" : "lower";
  std::printf("problem %s: v_sdp (%s bound) = %.6f\n", spec.name.c_str(),
              bound_kind, result.v_sdp);
  std::printf("extracted order-%d controller: v_p = %.6f +/- %.6f (%lld "
              "trials, %lld diverged)\n",
              opts.n_p, result.v_p, result.std_error, result.report.trials,
              result.report.diverged);
  std::printf("artifacts written to %s\n", opts.out_dir.c_str());
  return 0;
}

int run_sweep(const CommonArgs& args, const std::vector<int>& sizes) {
  const ProblemSpec spec = load_problem(args.problem);
  const PipelineOptions opts = to_options(args);
  const auto rows = sweep(spec, sizes, opts);
  std::printf("d_x   K       v_sdp         v_p   status\n");
  for (const auto& row : rows) {
    std::printf("%3d %3d %11.6f %11.6f   %s\n", row.d_x, row.K, row.v_sdp,
                row.v_p, row.status.c_str());
  }
  std::printf("sweep.csv written to %s\n", opts.out_dir.c_str());
  return 0;
}

int run_rerun(const std::string& manifest_path, const std::string& out_dir) {
  auto [spec, opts] = read_manifest(manifest_path);
  if (!out_dir.empty()) opts.out_dir = out_dir;
  const PipelineResult result = run_pipeline(spec, opts);
  std::printf("reproduced run: v_sdp = %.6f, v_p = %.6f +/- %.6f\n",
              result.v_sdp, result.v_p, result.std_error);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment-space bounds for scalar polynomial stochastic "
               "optimal control"};
  app.require_subcommand(1);

  CommonArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "solve one relaxation, extract a controller, simulate");
  add_common(solve_cmd, solve_args);

  CommonArgs sweep_args;
  std::vector<int> sweep_sizes;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a sequence of relaxation sizes");
  add_common(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--dx-list", sweep_sizes,
                        "comma-separated d_x values (overrides --dx)")
      ->delimiter(',');

  std::string manifest_path, rerun_out;
  CLI::App* rerun_cmd =
      app.add_subcommand("rerun", "reproduce a run from its manifest");
  rerun_cmd->add_option("--manifest", manifest_path, "manifest.json path")
      ->required();
  rerun_cmd->add_option("--out", rerun_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  const CommonArgs& args = app.got_subcommand("sweep") ? sweep_args : solve_args;
  const std::string out_dir =
      app.got_subcommand("rerun") ? (rerun_out.empty() ? "." : rerun_out)
                                  : args.out;
  try {
    if (app.got_subcommand("solve")) return run_solve(solve_args);
    if (app.got_subcommand("sweep")) {
      if (sweep_sizes.empty()) sweep_sizes = {sweep_args.d_x};
      return run_sweep(sweep_args, sweep_sizes);
    }
    return run_rerun(manifest_path, rerun_out);
  } catch (const ParseError& e) {
    write_error_record(out_dir, "parse_error", e.what());
    return kExitParse;
  } catch (const ValidationError& e) {
    write_error_record(out_dir, "validation_error", e.what());
    return kExitParse;
  } catch (const SizingError& e) {
    write_error_record(out_dir, "sizing_error", e.what());
    return kExitSizing;
  } catch (const DegreeError& e) {
    write_error_record(out_dir, "degree_error", e.what());
    return kExitSizing;
  } catch (const SolverError& e) {
    write_error_record(out_dir, "solver_error", e.what());
    return kExitSolver;
  } catch (const NumericalError& e) {
    write_error_record(out_dir, "numerical_error", e.what());
    return kExitSolver;
  } catch (const DivergenceError& e) {
    write_error_record(out_dir, "divergence_error", e.what());
    return kExitSim;
  } catch (const MissingMomentError& e) {
    write_error_record(out_dir, "missing_moment_error", e.what());
    return kExitSizing;
  } catch (const Error& e) {
    write_error_record(out_dir, "error", e.what());
    return 1;
  }
}
