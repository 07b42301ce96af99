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

#ifndef MSOC_PROBLEM_FILE_HPP
#define MSOC_PROBLEM_FILE_HPP

#include <string>
#include <vector>

#include "msoc/relaxation.hpp"

namespace msoc {

// Problem files are JSON documents:
//
//   {
//     "horizon": 1.0,
//     "x0": 0.0,
//     "maximize": false,            // optional, default false
//     "drift": [[i, j, coeff], ...],
//     "diffusion": [...],
//     "running_cost": [...],
//     "terminal_cost": [...],       // j must be 0 in every triplet
//     "constraints": [[...], ...]   // list of triplet lists, each b_l >= 0
//   }
//
// Duplicate (i, j) triplets are summed; unknown keys are rejected.
ProblemSpec parse_problem(const std::string& path);
ProblemSpec parse_problem_text(const std::string& text,
                               const std::string& name);

// Built-in example problems: "lqr", "cubic", "fisheries".
// The fisheries parameters (gamma = 1, sigma = 0.1, x0 = 1, T = 1) are this
// repo's choice; only qualitative claims should be pinned to them.
std::vector<std::string> fixture_names();
bool is_fixture(const std::string& name);
std::string fixture_text(const std::string& name);
ProblemSpec fixture(const std::string& name);

// Resolves a CLI --problem argument: an existing path wins, otherwise a
// fixture name is looked up.
ProblemSpec load_problem(const std::string& path_or_name);

// FNV-1a digest of the problem file bytes, for run manifests.
std::string digest_hex(const std::string& bytes);

}  // namespace msoc

#endif  // MSOC_PROBLEM_FILE_HPP
