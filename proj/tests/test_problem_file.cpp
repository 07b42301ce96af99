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

#include <doctest.h>

#include "msoc/errors.hpp"

using namespace msoc;

TEST_SUITE_BEGIN("problem_file");

TEST_CASE("built-in fixtures parse to the benchmark problems") {
  const ProblemSpec lqr = fixture("lqr");
  CHECK(lqr.drift == Polynomial::u());
  CHECK(lqr.diffusion == Polynomial(1.0));
  CHECK(lqr.running_cost == Polynomial::x(2) + Polynomial::u(2));
  CHECK(lqr.terminal_cost.is_zero());
  CHECK(lqr.horizon == 1.0);
  CHECK(lqr.x0 == 0.0);
  CHECK_FALSE(lqr.maximize);

  const ProblemSpec cubic = fixture("cubic");
  CHECK(cubic.running_cost ==
        Polynomial::x(2) + Polynomial::monomial(0, 2, 0.1));
  CHECK(cubic.terminal_cost == Polynomial::x(2));
  CHECK(cubic.drift.coeff(1, 0) == 2.25);
  CHECK(cubic.drift.coeff(3, 0) == -1.0);
  CHECK(cubic.drift.coeff(0, 1) == 1.0);

  const ProblemSpec fish = fixture("fisheries");
  CHECK(fish.maximize);
  CHECK(fish.constraints.size() == 2);
  CHECK(fish.constraints[0] == Polynomial::x());
  CHECK(fish.constraints[1] == Polynomial::u());
}

TEST_CASE("duplicate triplets are summed") {
  const ProblemSpec spec = parse_problem_text(R"({
    "horizon": 2.0, "x0": 0.5,
    "drift": [[1, 0, 1.0], [1, 0, 0.5]],
    "diffusion": [[0, 0, 1.0]],
    "running_cost": [[2, 0, 1.0]],
    "terminal_cost": [],
    "constraints": []
  })", "dup");
  CHECK(spec.drift == Polynomial::monomial(1, 0, 1.5));
}

TEST_CASE("rejects malformed documents") {
  CHECK_THROWS_AS(parse_problem_text("{not json", "x"), ParseError);
  CHECK_THROWS_AS(parse_problem_text("[1,2]", "x"), ParseError);

  // Unknown key.
  CHECK_THROWS_AS(parse_problem_text(R"({
    "horizon": 1.0, "x0": 0.0, "gamma": 1.0,
    "drift": [], "diffusion": [], "running_cost": [],
    "terminal_cost": [], "constraints": []
  })", "x"), ParseError);

  // Missing key.
  CHECK_THROWS_AS(parse_problem_text(R"({
    "horizon": 1.0, "x0": 0.0,
    "drift": [], "diffusion": [], "running_cost": [], "constraints": []
  })", "x"), ParseError);

  // Bad triplet arity and negative exponents.
  CHECK_THROWS_AS(parse_problem_text(R"({
    "horizon": 1.0, "x0": 0.0,
    "drift": [[1, 0]], "diffusion": [], "running_cost": [],
    "terminal_cost": [], "constraints": []
  })", "x"), ParseError);
  CHECK_THROWS_AS(parse_problem_text(R"({
    "horizon": 1.0, "x0": 0.0,
    "drift": [[-1, 0, 1.0]], "diffusion": [], "running_cost": [],
    "terminal_cost": [], "constraints": []
  })", "x"), ParseError);
}

TEST_CASE("semantic validation") {
  CHECK_THROWS_AS(parse_problem_text(R"({
    "horizon": -1.0, "x0": 0.0,
    "drift": [], "diffusion": [], "running_cost": [],
    "terminal_cost": [], "constraints": []
  })", "x"), ValidationError);

  // Terminal cost must not involve u.
  CHECK_THROWS_AS(parse_problem_text(R"({
    "horizon": 1.0, "x0": 0.0,
    "drift": [], "diffusion": [], "running_cost": [],
    "terminal_cost": [[0, 1, 1.0]], "constraints": []
  })", "x"), ValidationError);
}

TEST_CASE("load_problem resolves names and rejects junk") {
  CHECK(load_problem("cubic").name == "cubic");
  CHECK_THROWS_AS(load_problem("no_such_thing"), ParseError);
}

TEST_CASE("digest is stable") {
  CHECK(digest_hex("abc") == digest_hex("abc"));
  CHECK(digest_hex("abc") != digest_hex("abd"));
  CHECK(digest_hex("").rfind("fnv1a-", 0) == 0);
}

TEST_SUITE_END();
