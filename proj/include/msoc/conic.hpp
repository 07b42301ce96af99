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

#ifndef MSOC_CONIC_HPP
#define MSOC_CONIC_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "msoc/program.hpp"

namespace msoc {

// Cone of the slack variable s in  A x + s = b:  a zero cone, a nonnegative
// cone, then one PSD cone per moment matrix. PSD cones are stored in scaled
// triangular (svec) coordinates and consume side(side+1)/2 rows each.
struct ConeLayout {
  int zero = 0;
  int nonneg = 0;
  std::vector<int> psd_sides;

  int psd_rows() const;
  int total_rows() const;
};

struct StandardConicForm {
  int n = 0;  // number of variables
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  ConeLayout cones;
};

// Index bookkeeping for exact round-trips between a ConicProgram and its
// standard form. Program variable v equals var_scales[v] * x[v].
struct StandardFormMaps {
  std::vector<double> var_scales;
  int eq_row_start = 0;
  int ineq_row_start = 0;
  std::vector<int> psd_row_start;  // one per PSD block
};

std::pair<StandardConicForm, StandardFormMaps> to_standard_form(
    const ConicProgram& program);

struct SolverOptions {
  double eps_primal = 1e-6;
  double eps_dual = 1e-6;
  double eps_gap = 1e-6;
  int max_iters = 50000;
  double over_relaxation = 1.5;  // in (1, 2)
  bool scaling = true;           // Ruiz equilibration
  bool parallel = true;          // OpenMP over PSD blocks
  int check_interval = 25;
  // Weights of the primal and dual blocks in the splitting metric.
  double rho_x = 1e-3;
  double rho_y = 1.0;
  // Anderson acceleration of the splitting fixed point; a candidate is
  // adopted only when its residual is below aa_safeguard times the plain
  // step's. Memory 0 disables acceleration.
  int aa_memory = 10;
  double aa_safeguard = 1.0;
  bool verbose = false;
};

struct ConicSolution {
  Eigen::VectorXd x;  // primal variables
  Eigen::VectorXd y;  // dual variables, one per row
  Eigen::VectorXd s;  // primal slack, one per row
  SolveStatus status = SolveStatus::kMaxIters;
  Residuals residuals;
  int iterations = 0;
  double objective = 0.0;  // c'x
};

// Operator-splitting solve of min c'x  s.t.  Ax + s = b, s in K.
// Deterministic: identical inputs and options give bit-identical iterates
// regardless of the parallel flag.
ConicSolution solve(const StandardConicForm& sf, const SolverOptions& opts);

// Residuals of a candidate triple, computed directly from (A, b, c):
//   primal ||Ax + s - b|| / (1 + ||b||),  dual ||A'y + c|| / (1 + ||c||),
//   gap |c'x + b'y| / (1 + |c'x| + |b'y|).
Residuals compute_residuals(const StandardConicForm& sf,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& s);

// Frobenius-nearest PSD matrix: eigendecompose, clamp negative eigenvalues.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M);

// Scaled triangular vectorization: off-diagonal entries are multiplied by
// sqrt(2) so the PSD cone is self-dual under the Euclidean inner product.
Eigen::VectorXd svec(const Eigen::MatrixXd& M);
Eigen::MatrixXd unsvec(const Eigen::VectorXd& v, int side);

// Euclidean projection of a slack-space vector onto the cone product,
// in place. Zero-cone rows are projected when `dual` is false and left free
// when true (the dual of the zero cone); the nonnegative and PSD cones are
// self-dual. Per-block PSD projections run in parallel when requested and
// write disjoint segments, so the result does not depend on thread count.
void project_cone_inplace(Eigen::VectorXd& v, const ConeLayout& cones,
                          bool dual, bool parallel);

}  // namespace msoc

#endif  // MSOC_CONIC_HPP
