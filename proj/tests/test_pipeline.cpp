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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "msoc/errors.hpp"

using namespace msoc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

PipelineOptions fast_options(const fs::path& out) {
  PipelineOptions opts;
  opts.relax.d_x = 1;
  opts.relax.d_u = 1;
  opts.relax.N = 20;
  opts.n_p = 1;
  opts.sim.trials = 200;
  opts.sim.dt_sim = 1e-2;
  opts.out_dir = out.string();
  return opts;
}

}  // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("run writes every artifact and the bounds bracket holds") {
  const fs::path out = fs::temp_directory_path() / "msoc_pipe_test";
  fs::remove_all(out);
  const ProblemSpec spec = fixture("lqr");
  const PipelineResult result = run_pipeline(spec, fast_options(out));

  for (const char* name : {"manifest.json", "moments.csv", "cost_to_go.csv",
                           "controller.csv", "sim_summary.csv", "bounds.csv"}) {
    CHECK(fs::exists(out / name));
  }

  // Every CSV artifact begins with a header row.
  CHECK(slurp(out / "moments.csv").rfind("t,mu_x", 0) == 0);
  CHECK(slurp(out / "cost_to_go.csv").rfind("t,cost_to_go", 0) == 0);
  CHECK(slurp(out / "controller.csv").rfind("t,p0", 0) == 0);
  CHECK(slurp(out / "bounds.csv").rfind("v_sdp,v_p,std_error", 0) == 0);

  // Lower bound below simulated cost up to Monte Carlo noise.
  CHECK(result.v_sdp <= result.v_p + 3.0 * result.std_error);
  fs::remove_all(out);
}

TEST_CASE("manifest reruns reproduce artifacts bit for bit") {
  const fs::path out_a = fs::temp_directory_path() / "msoc_manifest_a";
  const fs::path out_b = fs::temp_directory_path() / "msoc_manifest_b";
  fs::remove_all(out_a);
  fs::remove_all(out_b);

  run_pipeline(fixture("cubic"), [&] {
    PipelineOptions opts = fast_options(out_a);
    opts.relax.d_x = 3;
    opts.n_p = 3;
    return opts;
  }());

  auto [spec, opts] = read_manifest((out_a / "manifest.json").string());
  opts.out_dir = out_b.string();
  run_pipeline(spec, opts);

  for (const char* name : {"moments.csv", "cost_to_go.csv", "controller.csv",
                           "sim_summary.csv", "bounds.csv"}) {
    CHECK(slurp(out_a / name) == slurp(out_b / name));
  }
  fs::remove_all(out_a);
  fs::remove_all(out_b);
}

TEST_CASE("single-size sweep matches a direct run") {
  const fs::path out = fs::temp_directory_path() / "msoc_sweep_test";
  fs::remove_all(out);
  const ProblemSpec spec = fixture("lqr");
  const auto rows = sweep(spec, {1}, fast_options(out));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "ok");
  CHECK(rows[0].K == 2);
  CHECK(fs::exists(out / "sweep.csv"));
  CHECK(fs::exists(out / "dx1" / "bounds.csv"));

  const PipelineResult direct =
      run_pipeline(spec, fast_options(out / "direct"));
  CHECK(rows[0].v_sdp == direct.v_sdp);
  CHECK(rows[0].v_p == direct.v_p);
  fs::remove_all(out);
}

TEST_CASE("sweep records failures and keeps going") {
  const fs::path out = fs::temp_directory_path() / "msoc_sweep_fail";
  fs::remove_all(out);
  ProblemSpec spec = fixture("cubic");
  spec.drift = Polynomial::x(5) + Polynomial::u();  // needs d_x >= 3
  const auto rows = sweep(spec, {1, 3}, fast_options(out));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status == "sizing_error");
  CHECK(rows[1].status == "ok");
  fs::remove_all(out);
}

TEST_SUITE_END();
