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

#ifndef MSOC_ERRORS_HPP
#define MSOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace msoc {

// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed problem file (bad syntax, unknown key, wrong shape).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input with inadmissible values (horizon <= 0, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Requested (K, r) needs moments outside the moment matrix, or even the
// smallest admissible sizes do not fit the dynamics degree.
class SizingError : public Error {
 public:
  using Error::Error;
};

// A cost or constraint polynomial references a moment that is not a
// variable of the assembled program.
class DegreeError : public Error {
 public:
  using Error::Error;
};

// Conic solve did not reach the requested tolerances.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double primal, double dual, double gap)
      : Error(what), primal_residual(primal), dual_residual(dual),
        duality_gap(gap) {}

  double primal_residual;
  double dual_residual;
  double duality_gap;
};

// Controller extraction needs a moment the relaxation did not compute.
class MissingMomentError : public Error {
 public:
  using Error::Error;
};

// Too many Monte Carlo trials left the admissible state range.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long long first_trial, long long count)
      : Error(what), first_diverged_trial(first_trial), diverged_count(count) {}

  long long first_diverged_trial;
  long long diverged_count;
};

// KKT factorization failed even after regularization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace msoc

#endif  // MSOC_ERRORS_HPP
