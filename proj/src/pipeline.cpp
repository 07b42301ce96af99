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

#include "msoc/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "msoc/errors.hpp"

namespace msoc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Interp interp) {
  return interp == Interp::kHold ? "hold" : "linear";
}

Interp interp_from_string(const std::string& s) {
  if (s == "hold") return Interp::kHold;
  if (s == "linear") return Interp::kLinear;
  throw ValidationError("unknown interpolation '" + s + "'");
}

namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json poly_to_triplets(const Polynomial& p) {
  json arr = json::array();
  for (const auto& [key, c] : p.terms()) {
    arr.push_back(json::array({key.i, key.j, c}));
  }
  return arr;
}

json problem_to_json(const ProblemSpec& spec) {
  json doc;
  doc["horizon"] = spec.horizon;
  doc["x0"] = spec.x0;
  doc["maximize"] = spec.maximize;
  doc["drift"] = poly_to_triplets(spec.drift);
  doc["diffusion"] = poly_to_triplets(spec.diffusion);
  doc["running_cost"] = poly_to_triplets(spec.running_cost);
  doc["terminal_cost"] = poly_to_triplets(spec.terminal_cost);
  json cons = json::array();
  for (const auto& b : spec.constraints) cons.push_back(poly_to_triplets(b));
  doc["constraints"] = cons;
  return doc;
}

void write_text(const fs::path& path, const std::string& text) {
  // Write-then-rename keeps partially written artifacts out of the run dir.
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw Error("cannot open '" + tmp.string() + "' for writing");
    os << text;
  }
  fs::rename(tmp, path);
}

void write_moments_csv(const fs::path& path, const MomentSolution& sol) {
  std::string out = "t";
  for (const auto& key : sol.keys) {
    out += ",mu_x" + std::to_string(key.i) + "u" + std::to_string(key.j);
  }
  out += "\n";
  for (std::size_t n = 0; n < sol.grid.size(); ++n) {
    out += full(sol.grid[n]);
    for (const auto& key : sol.keys) {
      out += ",";
      out += full(sol.value(static_cast<int>(n), key));
    }
    out += "\n";
  }
  write_text(path, out);
}

void write_cost_to_go_csv(const fs::path& path,
                          const std::vector<std::pair<double, double>>& ctg) {
  std::string out = "t,cost_to_go\n";
  for (const auto& [t, v] : ctg) {
    out += full(t);
    out += ",";
    out += full(v);
    out += "\n";
  }
  write_text(path, out);
}

void write_bounds_csv(const fs::path& path, const PipelineResult& result) {
  std::string out = "v_sdp,v_p,std_error\n";
  out += full(result.v_sdp);
  out += ",";
  out += full(result.v_p);
  out += ",";
  out += full(result.std_error);
  out += "\n";
  write_text(path, out);
}

}  // namespace

std::string manifest_json(const ProblemSpec& spec, const PipelineOptions& opts,
                          const SizingResult& sizing) {
  json doc;
  doc["tool"] = "msoc";
  doc["version"] = kToolVersion;
  doc["problem_name"] = spec.name;
  doc["problem"] = problem_to_json(spec);
  doc["problem_digest"] = digest_hex(doc["problem"].dump());
  json cfg;
  cfg["d_x"] = opts.relax.d_x;
  cfg["d_u"] = opts.relax.d_u;
  cfg["K"] = sizing.K;
  cfg["r"] = sizing.r;
  cfg["steps"] = opts.relax.N;
  cfg["scheme"] = to_string(opts.relax.scheme);
  cfg["eps_primal"] = opts.solver.eps_primal;
  cfg["eps_dual"] = opts.solver.eps_dual;
  cfg["eps_gap"] = opts.solver.eps_gap;
  cfg["max_iters"] = opts.solver.max_iters;
  cfg["over_relaxation"] = opts.solver.over_relaxation;
  cfg["scaling"] = opts.solver.scaling;
  cfg["n_p"] = opts.n_p;
  cfg["m"] = opts.m < 0 ? opts.n_p : opts.m;
  cfg["interpolation"] = to_string(opts.interp);
  cfg["trials"] = opts.sim.trials;
  cfg["dt_sim"] = opts.sim.dt_sim;
  cfg["seed"] = opts.sim.seed;
  cfg["clip_controls"] = opts.sim.clip_controls;
  cfg["record_moments_up_to"] = opts.sim.record_moments_up_to;
  cfg["dump_paths"] = opts.sim.dump_paths;
  doc["config"] = cfg;
  return doc.dump(2) + "\n";
}

std::pair<ProblemSpec, PipelineOptions> read_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open manifest '" + path + "'");
  json doc;
  try {
    is >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
  }
  ProblemSpec spec = parse_problem_text(doc.at("problem").dump(),
                                        doc.value("problem_name", "problem"));
  const json& cfg = doc.at("config");
  PipelineOptions opts;
  opts.relax.d_x = cfg.at("d_x").get<int>();
  opts.relax.d_u = cfg.at("d_u").get<int>();
  opts.relax.K = cfg.at("K").get<int>();
  opts.relax.r = cfg.at("r").get<std::vector<int>>();
  opts.relax.N = cfg.at("steps").get<int>();
  opts.relax.scheme = scheme_from_string(cfg.at("scheme").get<std::string>());
  opts.solver.eps_primal = cfg.at("eps_primal").get<double>();
  opts.solver.eps_dual = cfg.at("eps_dual").get<double>();
  opts.solver.eps_gap = cfg.at("eps_gap").get<double>();
  opts.solver.max_iters = cfg.at("max_iters").get<int>();
  opts.solver.over_relaxation = cfg.at("over_relaxation").get<double>();
  opts.solver.scaling = cfg.at("scaling").get<bool>();
  opts.n_p = cfg.at("n_p").get<int>();
  opts.m = cfg.at("m").get<int>();
  opts.interp = interp_from_string(cfg.at("interpolation").get<std::string>());
  opts.sim.trials = cfg.at("trials").get<long long>();
  opts.sim.dt_sim = cfg.at("dt_sim").get<double>();
  opts.sim.seed = cfg.at("seed").get<std::uint64_t>();
  opts.sim.clip_controls = cfg.at("clip_controls").get<bool>();
  opts.sim.record_moments_up_to = cfg.at("record_moments_up_to").get<int>();
  opts.sim.dump_paths = cfg.at("dump_paths").get<int>();
  return {std::move(spec), std::move(opts)};
}

PipelineResult run_pipeline(const ProblemSpec& spec,
                            const PipelineOptions& opts) {
  PipelineResult result;
  result.sizing = resolve_sizing(spec, opts.relax);

  RelaxationConfig relax = opts.relax;
  relax.K = result.sizing.K;
  relax.r = result.sizing.r;

  result.solution = solve_relaxation(spec, relax, opts.solver);
  result.v_sdp = result.solution.objective_value;

  const int m = opts.m < 0 ? opts.n_p : opts.m;
  result.controller =
      extract_controller(result.solution, opts.n_p, m, opts.interp,
                         opts.solver.parallel);

  SimConfig sim = opts.sim;
  sim.parallel = opts.solver.parallel;
  result.report = simulate(spec, &result.controller, sim);
  result.v_p = result.report.mean_cost;
  result.std_error = result.report.std_error;

  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  write_moments_csv(out / "moments.csv", result.solution);
  write_cost_to_go_csv(out / "cost_to_go.csv",
                       cost_to_go(result.solution, spec, relax));
  write_controller_csv((out / "controller.csv").string(), result.controller);
  write_sim_summary_csv((out / "sim_summary.csv").string(), result.report);
  if (sim.dump_paths > 0) {
    write_paths_csv((out / "paths.csv").string(), result.report);
  }
  write_bounds_csv(out / "bounds.csv", result);
  write_text(out / "manifest.json", manifest_json(spec, opts, result.sizing));
  return result;
}

std::vector<SweepRow> sweep(const ProblemSpec& spec,
                            const std::vector<int>& d_x_list,
                            const PipelineOptions& base) {
  if (d_x_list.empty()) throw ValidationError("sweep needs at least one size");
  std::vector<SweepRow> rows;
  const fs::path out(base.out_dir);
  fs::create_directories(out);

  for (int d_x : d_x_list) {
    PipelineOptions opts = base;
    opts.relax.d_x = d_x;
    opts.relax.K = 0;  // re-derive sizing for each entry
    opts.relax.r.clear();
    opts.out_dir = (out / ("dx" + std::to_string(d_x))).string();

    SweepRow row;
    row.d_x = d_x;
    row.d_u = opts.relax.d_u;
    const auto start = std::chrono::steady_clock::now();
    try {
      const PipelineResult result = run_pipeline(spec, opts);
      row.K = result.sizing.K;
      row.v_sdp = result.v_sdp;
      row.v_p = result.v_p;
      row.status = "ok";
    } catch (const SizingError&) {
      row.status = "sizing_error";
    } catch (const SolverError&) {
      row.status = "solver_error";
    } catch (const DivergenceError&) {
      row.status = "divergence_error";
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    rows.push_back(row);
  }

  std::string csv = "d_x,d_u,K,v_sdp,v_p,wall_time_s,status\n";
  for (const auto& row : rows) {
    csv += std::to_string(row.d_x) + "," + std::to_string(row.d_u) + "," +
           std::to_string(row.K) + "," + full(row.v_sdp) + "," +
           full(row.v_p) + "," + full(row.wall_time_s) + "," + row.status +
           "\n";
  }
  write_text(out / "sweep.csv", csv);
  return rows;
}

}  // namespace msoc
