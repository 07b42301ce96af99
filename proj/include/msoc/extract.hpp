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

#ifndef MSOC_EXTRACT_HPP
#define MSOC_EXTRACT_HPP

#include <string>
#include <vector>

#include "msoc/relaxation.hpp"

namespace msoc {

enum class Interp { kHold, kLinear };

// Time-varying polynomial feedback u = p_0(t) + p_1(t) x + ... + p_n(t) x^n,
// with coefficients stored at the relaxation grid points.
struct PolynomialController {
  int order = 0;  // n_p
  Interp interpolation = Interp::kLinear;
  std::vector<double> grid;
  std::vector<std::vector<double>> coeffs;  // per grid point, order+1 values
};

// Per-grid-point least squares on the moment identities
//   mu^{x^k u} = sum_c p_c(t) mu^{x^{k+c}},  k = 0..m.
// Columns are norm-scaled before the solve; rank-deficient systems get the
// minimum-norm solution with singular values below 1e-10 sigma_max dropped.
// Throws MissingMomentError when the relaxation lacks a required moment.
PolynomialController extract_controller(const MomentSolution& sol, int order,
                                        int m, Interp interp = Interp::kLinear,
                                        bool parallel = true);

// Controller value at (t, x): coefficients held or linearly interpolated
// between bracketing grid points, then Horner evaluation in x.
double eval_control(const PolynomialController& ctrl, double t, double x);

// CSV with header t,p0,...,pn and one row per grid point.
void write_controller_csv(const std::string& path,
                          const PolynomialController& ctrl);
PolynomialController read_controller_csv(const std::string& path);

}  // namespace msoc

#endif  // MSOC_EXTRACT_HPP
