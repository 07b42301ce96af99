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

// Compares the OpenMP kernels against their serial reference on the three
// data-parallel hot spots: batched PSD cone projection, Monte Carlo
// simulation, and a full relaxation solve. The serial and parallel paths
// must agree bit for bit; the benchmark prints the max deviation alongside
// the timings so a nonzero value is immediately visible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "msoc/conic.hpp"
#include "msoc/pipeline.hpp"
#include "msoc/problem_file.hpp"
#include "msoc/program_io.hpp"
#include "msoc/rng.hpp"

namespace {

using namespace msoc;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct KernelTiming {
  double serial_s = 0.0;
  double parallel_s = 0.0;
  double max_diff = 0.0;
};

void print_row(const std::string& name, const KernelTiming& t) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx   max|diff| %.3g\n",
              name.c_str(), 1e3 * t.serial_s, 1e3 * t.parallel_s,
              t.serial_s / std::max(t.parallel_s, 1e-12), t.max_diff);
}

KernelTiming bench_cone_projection(const StandardConicForm& sf, int reps) {
  CounterRng rng(7, 1);
  Eigen::VectorXd base(sf.cones.total_rows());
  for (int i = 0; i < base.size(); ++i) base[i] = 2.0 * rng.next_normal();

  KernelTiming t;
  Eigen::VectorXd serial_out, parallel_out;
  for (int mode = 0; mode < 2; ++mode) {
    const bool parallel = mode == 1;
    Eigen::VectorXd v;
    const double start = now_seconds();
    for (int rep = 0; rep < reps; ++rep) {
      v = base;
      project_cone_inplace(v, sf.cones, /*dual=*/true, parallel);
    }
    const double elapsed = now_seconds() - start;
    (parallel ? t.parallel_s : t.serial_s) = elapsed;
    (parallel ? parallel_out : serial_out) = v;
  }
  t.max_diff = (serial_out - parallel_out).cwiseAbs().maxCoeff();
  return t;
}

KernelTiming bench_simulation(const ProblemSpec& spec, long long trials) {
  SimConfig cfg;
  cfg.trials = trials;
  cfg.record_moments_up_to = 6;
  KernelTiming t;
  SimReport serial_report, parallel_report;
  for (int mode = 0; mode < 2; ++mode) {
    cfg.parallel = mode == 1;
    const double start = now_seconds();
    SimReport report = simulate(spec, nullptr, cfg);
    const double elapsed = now_seconds() - start;
    (cfg.parallel ? t.parallel_s : t.serial_s) = elapsed;
    (cfg.parallel ? parallel_report : serial_report) = std::move(report);
  }
  t.max_diff = std::abs(serial_report.mean_cost - parallel_report.mean_cost);
  for (std::size_t g = 0; g < serial_report.moments.size(); ++g) {
    for (std::size_t k = 0; k < serial_report.moments[g].size(); ++k) {
      t.max_diff = std::max(t.max_diff,
                            std::abs(serial_report.moments[g][k] -
                                     parallel_report.moments[g][k]));
    }
  }
  return t;
}

KernelTiming bench_solve(const StandardConicForm& sf) {
  SolverOptions opts;
  opts.eps_primal = opts.eps_dual = opts.eps_gap = 1e-5;
  KernelTiming t;
  Eigen::VectorXd serial_x, parallel_x;
  for (int mode = 0; mode < 2; ++mode) {
    opts.parallel = mode == 1;
    const double start = now_seconds();
    const ConicSolution sol = solve(sf, opts);
    const double elapsed = now_seconds() - start;
    (opts.parallel ? t.parallel_s : t.serial_s) = elapsed;
    (opts.parallel ? parallel_x : serial_x) = sol.x;
  }
  t.max_diff = (serial_x - parallel_x).cwiseAbs().maxCoeff();
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  std::string problem = "cubic";
  std::string program_file;
  int d_x = 5;
  int steps = 100;
  int reps = 200;
  long long trials = 20000;
  app.add_option("--problem", problem, "fixture or problem file");
  app.add_option("--program", program_file,
                 "benchmark a previously exported conic program instead");
  app.add_option("--dx", d_x, "relaxation size");
  app.add_option("--steps", steps, "time steps");
  app.add_option("--reps", reps, "cone projection repetitions");
  app.add_option("--trials", trials, "Monte Carlo trials");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel path runs serially\n");
#endif

  const ProblemSpec spec = load_problem(problem);
  ConicProgram program;
  if (!program_file.empty()) {
    program = read_program_file(program_file);
  } else {
    RelaxationConfig cfg;
    cfg.d_x = d_x;
    cfg.N = steps;
    program = assemble(spec, cfg);
  }
  const auto [sf, maps] = to_standard_form(program);
  std::printf("program: %d vars, %d rows, %zu PSD blocks of side %d\n", sf.n,
              sf.cones.total_rows(), sf.cones.psd_sides.size(),
              sf.cones.psd_sides.empty() ? 0 : sf.cones.psd_sides[0]);

  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");
  print_row("cone projection x" + std::to_string(reps),
            bench_cone_projection(sf, reps));
  print_row("monte carlo x" + std::to_string(trials),
            bench_simulation(spec, trials));
  print_row("full solve", bench_solve(sf));
  return 0;
}
