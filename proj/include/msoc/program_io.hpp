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

#ifndef MSOC_PROGRAM_IO_HPP
#define MSOC_PROGRAM_IO_HPP

#include <iosfwd>
#include <string>

#include "msoc/program.hpp"

namespace msoc {

// Sparse text format for assembled programs, used for standalone
// benchmarking and cross-checks against external solvers:
//
//   msoc-program 1
//   vars <count>
//   var <time> <i> <j> <scale>            one line per variable
//   objective <nnz> <constant> [<index> <coef>]...
//   eq <count>                            then one "row ..." line each
//   ineq <count>                          then one "row ..." line each
//   psd <count>                           then per block:
//   block <time> <side>                   followed by side(side+1)/2
//   row <nnz> <constant> [<index> <coef>]...    entries in svec order
//
// Numbers are written with %.17g so a write/read round trip is exact.
void write_program(std::ostream& os, const ConicProgram& program);
ConicProgram read_program(std::istream& is);

void write_program_file(const std::string& path, const ConicProgram& program);
ConicProgram read_program_file(const std::string& path);

}  // namespace msoc

#endif  // MSOC_PROGRAM_IO_HPP
