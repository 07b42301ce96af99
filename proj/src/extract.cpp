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

#include "msoc/extract.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "msoc/errors.hpp"

namespace msoc {

PolynomialController extract_controller(const MomentSolution& sol, int order,
                                        int m, Interp interp, bool parallel) {
  if (order < 0) throw ValidationError("controller order must be >= 0");
  if (m < 0) throw ValidationError("m must be >= 0");
  const int points = static_cast<int>(sol.grid.size());

  // Fail fast on the first grid point before spawning the per-point solves.
  for (int a = 0; a <= m + order; ++a) {
    if (!sol.has(0, {a, 0})) {
      throw MissingMomentError("extraction needs " + key_name({a, 0}) +
                               "; enlarge d_x or lower n_p / m");
    }
  }
  for (int k = 0; k <= m; ++k) {
    if (!sol.has(0, {k, 1})) {
      throw MissingMomentError("extraction needs " + key_name({k, 1}) +
                               "; enlarge d_x or lower m");
    }
  }

  PolynomialController ctrl;
  ctrl.order = order;
  ctrl.interpolation = interp;
  ctrl.grid = sol.grid;
  ctrl.coeffs.assign(points, std::vector<double>(order + 1, 0.0));

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int n = 0; n < points; ++n) {
    Eigen::MatrixXd A(m + 1, order + 1);
    Eigen::VectorXd rhs(m + 1);
    for (int k = 0; k <= m; ++k) {
      for (int c = 0; c <= order; ++c) A(k, c) = sol.value(n, {k + c, 0});
      rhs(k) = sol.value(n, {k, 1});
    }
    // Norm-scale columns so high moments do not dominate the conditioning.
    Eigen::VectorXd col_scale(order + 1);
    for (int c = 0; c <= order; ++c) {
      const double norm = A.col(c).norm();
      col_scale(c) = norm > 0.0 ? norm : 1.0;
      A.col(c) /= col_scale(c);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Eigen::VectorXd p = svd.solve(rhs);
    for (int c = 0; c <= order; ++c) ctrl.coeffs[n][c] = p(c) / col_scale(c);
  }
  return ctrl;
}

namespace {

double eval_coeffs(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

}  // namespace

double eval_control(const PolynomialController& ctrl, double t, double x) {
  const auto& grid = ctrl.grid;
  if (grid.empty()) return 0.0;
  if (t <= grid.front()) return eval_coeffs(ctrl.coeffs.front(), x);
  if (t >= grid.back()) return eval_coeffs(ctrl.coeffs.back(), x);

  const auto upper = std::upper_bound(grid.begin(), grid.end(), t);
  const int hi = static_cast<int>(upper - grid.begin());
  const int lo = hi - 1;
  if (ctrl.interpolation == Interp::kHold || grid[hi] == grid[lo]) {
    return eval_coeffs(ctrl.coeffs[lo], x);
  }
  const double w = (t - grid[lo]) / (grid[hi] - grid[lo]);
  std::vector<double> blended(ctrl.coeffs[lo].size());
  for (std::size_t c = 0; c < blended.size(); ++c) {
    blended[c] = (1.0 - w) * ctrl.coeffs[lo][c] + w * ctrl.coeffs[hi][c];
  }
  return eval_coeffs(blended, x);
}

void write_controller_csv(const std::string& path,
                          const PolynomialController& ctrl) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << 't';
  for (int c = 0; c <= ctrl.order; ++c) os << ",p" << c;
  os << '\n';
  char buf[40];
  for (std::size_t n = 0; n < ctrl.grid.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%.17g", ctrl.grid[n]);
    os << buf;
    for (double c : ctrl.coeffs[n]) {
      std::snprintf(buf, sizeof buf, "%.17g", c);
      os << ',' << buf;
    }
    os << '\n';
  }
}

PolynomialController read_controller_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,p0", 0) != 0) {
    throw ParseError("not a controller CSV: '" + path + "'");
  }
  PolynomialController ctrl;
  ctrl.order = static_cast<int>(std::count(line.begin(), line.end(), ',')) - 1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != ctrl.order + 2) {
      throw ParseError("controller CSV row has wrong arity");
    }
    ctrl.grid.push_back(row[0]);
    ctrl.coeffs.emplace_back(row.begin() + 1, row.end());
  }
  return ctrl;
}

}  // namespace msoc
