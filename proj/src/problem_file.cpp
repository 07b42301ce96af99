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

#include "msoc/problem_file.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msoc/errors.hpp"

namespace msoc {

namespace {

using nlohmann::json;

const char* const kLqrJson = R"({
  "horizon": 1.0,
  "x0": 0.0,
  "drift": [[0, 1, 1.0]],
  "diffusion": [[0, 0, 1.0]],
  "running_cost": [[2, 0, 1.0], [0, 2, 1.0]],
  "terminal_cost": [],
  "constraints": []
})";

const char* const kCubicJson = R"({
  "horizon": 1.0,
  "x0": 0.0,
  "drift": [[1, 0, 2.25], [3, 0, -1.0], [0, 1, 1.0]],
  "diffusion": [[0, 0, 1.0]],
  "running_cost": [[2, 0, 1.0], [0, 2, 0.1]],
  "terminal_cost": [[2, 0, 1.0]],
  "constraints": []
})";

// Harvest model with repo-chosen parameters (gamma=1, sigma=0.1, x0=1, T=1).
const char* const kFisheriesJson = R"({
  "horizon": 1.0,
  "x0": 1.0,
  "maximize": true,
  "drift": [[1, 0, 1.0], [2, 0, -1.0], [0, 1, -1.0]],
  "diffusion": [[1, 0, 0.1]],
  "running_cost": [[0, 1, 1.0]],
  "terminal_cost": [],
  "constraints": [[[1, 0, 1.0]], [[0, 1, 1.0]]]
})";

Polynomial triplets_to_poly(const json& arr, const std::string& field) {
  if (!arr.is_array()) {
    throw ParseError("'" + field + "' must be a list of [i, j, coeff]");
  }
  Polynomial::TermMap terms;
  for (const auto& triplet : arr) {
    if (!triplet.is_array() || triplet.size() != 3 ||
        !triplet[0].is_number_integer() || !triplet[1].is_number_integer() ||
        !triplet[2].is_number()) {
      throw ParseError("'" + field + "' entries must be [i, j, coeff]");
    }
    const int i = triplet[0].get<int>();
    const int j = triplet[1].get<int>();
    if (i < 0 || j < 0) {
      throw ParseError("'" + field + "' exponents must be nonnegative");
    }
    terms[{i, j}] += triplet[2].get<double>();  // duplicates summed
  }
  return Polynomial(std::move(terms));
}

}  // namespace

ProblemSpec parse_problem_text(const std::string& text,
                               const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem file is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("problem file must be a JSON object");

  static const std::vector<std::string> known = {
      "horizon",       "x0",          "maximize",    "drift",
      "diffusion",     "running_cost", "terminal_cost", "constraints"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError("unknown key '" + key + "' in problem file");
    }
  }
  for (const auto& key : known) {
    if (key != "maximize" && !doc.contains(key)) {
      throw ParseError("missing key '" + key + "' in problem file");
    }
  }

  ProblemSpec spec;
  spec.name = name;
  if (!doc["horizon"].is_number()) throw ParseError("'horizon' must be a number");
  if (!doc["x0"].is_number()) throw ParseError("'x0' must be a number");
  spec.horizon = doc["horizon"].get<double>();
  spec.x0 = doc["x0"].get<double>();
  if (doc.contains("maximize")) {
    if (!doc["maximize"].is_boolean()) {
      throw ParseError("'maximize' must be a boolean");
    }
    spec.maximize = doc["maximize"].get<bool>();
  }
  spec.drift = triplets_to_poly(doc["drift"], "drift");
  spec.diffusion = triplets_to_poly(doc["diffusion"], "diffusion");
  spec.running_cost = triplets_to_poly(doc["running_cost"], "running_cost");
  spec.terminal_cost = triplets_to_poly(doc["terminal_cost"], "terminal_cost");
  if (!doc["constraints"].is_array()) {
    throw ParseError("'constraints' must be a list of triplet lists");
  }
  int index = 0;
  for (const auto& entry : doc["constraints"]) {
    spec.constraints.push_back(
        triplets_to_poly(entry, "constraints[" + std::to_string(index) + "]"));
    ++index;
  }
  spec.validate();  // ValidationError on horizon <= 0 or u in terminal cost
  return spec;
}

ProblemSpec parse_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open problem file '" + path + "'");
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_problem_text(buffer.str(),
                            std::filesystem::path(path).stem().string());
}

std::vector<std::string> fixture_names() { return {"lqr", "cubic", "fisheries"}; }

bool is_fixture(const std::string& name) {
  const auto names = fixture_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string fixture_text(const std::string& name) {
  if (name == "lqr") return kLqrJson;
  if (name == "cubic") return kCubicJson;
  if (name == "fisheries") return kFisheriesJson;
  throw ParseError("unknown fixture '" + name + "'");
}

ProblemSpec fixture(const std::string& name) {
  return parse_problem_text(fixture_text(name), name);
}

ProblemSpec load_problem(const std::string& path_or_name) {
  if (std::filesystem::exists(path_or_name)) return parse_problem(path_or_name);
  if (is_fixture(path_or_name)) return fixture(path_or_name);
  throw ParseError("'" + path_or_name +
                   "' is neither a problem file nor a built-in fixture");
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "fnv1a-%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace msoc
