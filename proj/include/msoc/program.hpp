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

#ifndef MSOC_PROGRAM_HPP
#define MSOC_PROGRAM_HPP

#include <utility>
#include <vector>

#include "msoc/moments.hpp"

namespace msoc {

// Sparse affine function of program variables.
struct AffineExpr {
  std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
  double constant = 0.0;
};

// One per-time-step moment matrix, stored as the upper triangle in
// column-major order: entry t = col(col+1)/2 + row with row <= col. The
// implied full matrix is symmetric by construction.
struct PsdBlock {
  int time_index = 0;
  int side = 0;
  std::vector<AffineExpr> entries;  // side(side+1)/2 entries
};

// Standard-form conic program over per-time-step moment variables: linear
// objective, affine equalities (== 0), affine inequalities (>= 0), and PSD
// matrix constraints.
struct ConicProgram {
  int num_vars = 0;
  std::vector<std::pair<int, MomentKey>> variables;  // (time index, key)
  AffineExpr objective;
  std::vector<AffineExpr> equalities;
  std::vector<AffineExpr> inequalities;
  std::vector<PsdBlock> psd_blocks;
  // Diagonal variable scaling applied before the solve and undone after.
  std::vector<double> var_scales;
};

enum class SolveStatus { kOptimal, kMaxIters, kInfeasible };

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

}  // namespace msoc

#endif  // MSOC_PROGRAM_HPP
