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

#include "msoc/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include <Eigen/SparseCholesky>

#include "msoc/errors.hpp"

namespace msoc {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kKktRegularization = 1e-8;
constexpr int kRuizIterations = 10;

}  // namespace

int ConeLayout::psd_rows() const {
  int rows = 0;
  for (int s : psd_sides) rows += s * (s + 1) / 2;
  return rows;
}

int ConeLayout::total_rows() const { return zero + nonneg + psd_rows(); }

Eigen::VectorXd svec(const Eigen::MatrixXd& M) {
  const int s = static_cast<int>(M.rows());
  Eigen::VectorXd v(s * (s + 1) / 2);
  int t = 0;
  for (int col = 0; col < s; ++col) {
    for (int row = 0; row <= col; ++row) {
      v[t++] = row == col ? M(row, col) : kSqrt2 * M(row, col);
    }
  }
  return v;
}

Eigen::MatrixXd unsvec(const Eigen::VectorXd& v, int side) {
  Eigen::MatrixXd M(side, side);
  int t = 0;
  for (int col = 0; col < side; ++col) {
    for (int row = 0; row <= col; ++row) {
      const double value = row == col ? v[t] : v[t] / kSqrt2;
      M(row, col) = value;
      M(col, row) = value;
      ++t;
    }
  }
  return M;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M) {
  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.eigenvalues().minCoeff() >= 0.0) return sym;
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clamped.asDiagonal() *
         eig.eigenvectors().transpose();
}

void project_cone_inplace(Eigen::VectorXd& v, const ConeLayout& cones,
                          bool dual, bool parallel) {
  if (!dual && cones.zero > 0) v.head(cones.zero).setZero();
  if (cones.nonneg > 0) {
    v.segment(cones.zero, cones.nonneg) =
        v.segment(cones.zero, cones.nonneg).cwiseMax(0.0);
  }
  const int nblocks = static_cast<int>(cones.psd_sides.size());
  if (nblocks == 0) return;
  std::vector<int> offsets(nblocks);
  int off = cones.zero + cones.nonneg;
  for (int b = 0; b < nblocks; ++b) {
    offsets[b] = off;
    off += cones.psd_sides[b] * (cones.psd_sides[b] + 1) / 2;
  }
  // Each block writes only its own segment; the merge is order-free.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int b = 0; b < nblocks; ++b) {
    const int side = cones.psd_sides[b];
    const int len = side * (side + 1) / 2;
    const Eigen::MatrixXd projected =
        project_psd(unsvec(v.segment(offsets[b], len), side));
    v.segment(offsets[b], len) = svec(projected);
  }
}

std::pair<StandardConicForm, StandardFormMaps> to_standard_form(
    const ConicProgram& program) {
  const int n = program.num_vars;
  StandardFormMaps maps;
  maps.var_scales = program.var_scales;
  if (maps.var_scales.empty()) maps.var_scales.assign(n, 1.0);

  StandardConicForm sf;
  sf.n = n;
  sf.cones.zero = static_cast<int>(program.equalities.size());
  sf.cones.nonneg = static_cast<int>(program.inequalities.size());
  for (const auto& block : program.psd_blocks) {
    sf.cones.psd_sides.push_back(block.side);
  }
  const int m = sf.cones.total_rows();

  sf.b = Eigen::VectorXd::Zero(m);
  sf.c = Eigen::VectorXd::Zero(n);
  for (const auto& [var, coef] : program.objective.coeffs) {
    sf.c[var] += coef * maps.var_scales[var];
  }

  std::vector<Eigen::Triplet<double>> triplets;
  int row = 0;
  maps.eq_row_start = 0;
  for (const auto& expr : program.equalities) {
    for (const auto& [var, coef] : expr.coeffs) {
      triplets.emplace_back(row, var, coef * maps.var_scales[var]);
    }
    sf.b[row] = -expr.constant;
    ++row;
  }
  maps.ineq_row_start = row;
  for (const auto& expr : program.inequalities) {
    for (const auto& [var, coef] : expr.coeffs) {
      triplets.emplace_back(row, var, -coef * maps.var_scales[var]);
    }
    sf.b[row] = expr.constant;
    ++row;
  }
  for (const auto& block : program.psd_blocks) {
    maps.psd_row_start.push_back(row);
    int t = 0;
    for (int col = 0; col < block.side; ++col) {
      for (int r = 0; r <= col; ++r) {
        const double scale = r == col ? 1.0 : kSqrt2;
        const AffineExpr& entry = block.entries[t];
        for (const auto& [var, coef] : entry.coeffs) {
          triplets.emplace_back(row, var,
                                -scale * coef * maps.var_scales[var]);
        }
        sf.b[row] = scale * entry.constant;
        ++row;
        ++t;
      }
    }
  }

  sf.A.resize(m, n);
  sf.A.setFromTriplets(triplets.begin(), triplets.end());
  sf.A.makeCompressed();
  return {std::move(sf), std::move(maps)};
}

Residuals compute_residuals(const StandardConicForm& sf,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& s) {
  Residuals res;
  res.primal = (sf.A * x + s - sf.b).norm() / (1.0 + sf.b.norm());
  res.dual = (sf.A.transpose() * y + sf.c).norm() / (1.0 + sf.c.norm());
  const double cx = sf.c.dot(x);
  const double by = sf.b.dot(y);
  res.gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
  return res;
}

namespace {

// Ruiz equilibration of A, cone-aware: rows inside one PSD block share a
// single factor so the scaled slack stays inside the same cone.
void equilibrate(Eigen::SparseMatrix<double>& A, const ConeLayout& cones,
                 Eigen::VectorXd& row_scale, Eigen::VectorXd& col_scale) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  row_scale.setOnes(m);
  col_scale.setOnes(n);

  Eigen::VectorXd row_max(m), col_max(n);
  for (int iter = 0; iter < kRuizIterations; ++iter) {
    row_max.setZero();
    col_max.setZero();
    for (int col = 0; col < n; ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
        const double mag = std::abs(it.value());
        row_max[it.row()] = std::max(row_max[it.row()], mag);
        col_max[col] = std::max(col_max[col], mag);
      }
    }
    int off = cones.zero + cones.nonneg;
    for (int side : cones.psd_sides) {
      const int len = side * (side + 1) / 2;
      const double mean = row_max.segment(off, len).mean();
      row_max.segment(off, len).setConstant(mean);
      off += len;
    }
    auto factor = [](double v) {
      if (v < 1e-10) return 1.0;
      return 1.0 / std::sqrt(v);
    };
    Eigen::VectorXd dr = row_max.unaryExpr(factor);
    Eigen::VectorXd dc = col_max.unaryExpr(factor);
    for (int col = 0; col < n; ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
        it.valueRef() *= dr[it.row()] * dc[col];
      }
    }
    row_scale.array() *= dr.array();
    col_scale.array() *= dc.array();
  }
}

// Type-II Anderson acceleration over the splitting fixed point, with the
// usual residual safeguard: a candidate is only adopted when its own
// fixed-point residual beats the plain step's.
class AndersonAccelerator {
 public:
  AndersonAccelerator(int dim, int memory)
      : dim_(dim), memory_(memory), Z_(dim, memory), F_(dim, memory) {}

  void push(const Eigen::VectorXd& z, const Eigen::VectorXd& f) {
    const int slot = count_ % memory_;
    Z_.col(slot) = z;
    F_.col(slot) = f;
    ++count_;
  }

  void reset() { count_ = 0; }

  bool ready() const { return count_ >= 2; }

  // Combines the stored iterates; needs ready().
  Eigen::VectorXd candidate() const {
    const int k = std::min(count_, memory_);
    const int newest = (count_ - 1) % memory_;
    Eigen::MatrixXd dG(dim_, k - 1), dF(dim_, k - 1);
    for (int j = 1; j < k; ++j) {
      const int hi = (count_ - j) % memory_;
      const int lo = (count_ - j - 1 + memory_) % memory_;
      dG.col(j - 1) = (F_.col(hi) - Z_.col(hi)) - (F_.col(lo) - Z_.col(lo));
      dF.col(j - 1) = F_.col(hi) - F_.col(lo);
    }
    const Eigen::VectorXd g = F_.col(newest) - Z_.col(newest);
    Eigen::MatrixXd gram = dG.transpose() * dG;
    gram.diagonal().array() += 1e-10 * std::max(1.0, gram.trace());
    const Eigen::VectorXd gamma = gram.ldlt().solve(dG.transpose() * g);
    return F_.col(newest) - dF * gamma;
  }

 private:
  int dim_;
  int memory_;
  int count_ = 0;
  Eigen::MatrixXd Z_, F_;
};

struct KktSolver {
  // Symmetric quasi-definite system [ rho_x I  A' ; A  -rho_y I ] plus a
  // static diagonal regularization, factorized once and reused every
  // iteration.
  KktSolver(const Eigen::SparseMatrix<double>& A, double rho_x, double rho_y) {
    const int n = static_cast<int>(A.cols());
    const int m = static_cast<int>(A.rows());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(A.nonZeros() + n + m);
    for (int i = 0; i < n; ++i) {
      triplets.emplace_back(i, i, rho_x * (1.0 + kKktRegularization));
    }
    for (int i = 0; i < m; ++i) {
      triplets.emplace_back(n + i, n + i, -rho_y * (1.0 + kKktRegularization));
    }
    for (int col = 0; col < n; ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
        triplets.emplace_back(n + it.row(), col, it.value());
        triplets.emplace_back(col, n + it.row(), it.value());
      }
    }
    Eigen::SparseMatrix<double> M(n + m, n + m);
    M.setFromTriplets(triplets.begin(), triplets.end());
    M.makeCompressed();
    ldlt_.compute(M);
    if (ldlt_.info() != Eigen::Success) {
      throw NumericalError("KKT factorization failed");
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    return ldlt_.solve(rhs);
  }

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

}  // namespace

ConicSolution solve(const StandardConicForm& sf, const SolverOptions& opts) {
  const int n = sf.n;
  const int m = static_cast<int>(sf.A.rows());

  // Scaled working copy. The original sf stays untouched for residual checks.
  Eigen::SparseMatrix<double> A = sf.A;
  Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd col_scale = Eigen::VectorXd::Ones(n);
  if (opts.scaling && m > 0 && n > 0) {
    equilibrate(A, sf.cones, row_scale, col_scale);
  }
  Eigen::VectorXd b = row_scale.asDiagonal() * sf.b;
  Eigen::VectorXd c = col_scale.asDiagonal() * sf.c;
  // Balance ||b|| and ||c|| against the equilibrated matrix so the
  // homogeneous embedding treats primal and dual symmetrically; without
  // this the iteration count grows with the time-grid length.
  double sigma_b = 1.0, sigma_c = 1.0;
  if (opts.scaling && m > 0 && n > 0) {
    double col_norm_sum = 0.0;
    for (int col = 0; col < n; ++col) col_norm_sum += A.col(col).norm();
    const double mean_col_norm = col_norm_sum / n;
    sigma_b = mean_col_norm / std::max(b.norm(), 1e-6);
    sigma_c = mean_col_norm / std::max(c.norm(), 1e-6);
    b *= sigma_b;
    c *= sigma_c;
  }

  const double rho_x = opts.rho_x;
  const double rho_y = opts.rho_y;
  const KktSolver kkt(A, rho_x, rho_y);

  // Constant part of the metric-weighted affine projection
  // (R + Q)^{-1} R w with R = diag(rho_x I, rho_y I, 1).
  Eigen::VectorXd h_rhs(n + m);
  h_rhs.head(n) = c;
  h_rhs.tail(m) = -b;
  const Eigen::VectorXd z_h = kkt.solve(h_rhs);
  const double denom = 1.0 + c.dot(z_h.head(n)) + b.dot(z_h.tail(m));

  auto solve_iq = [&](const Eigen::VectorXd& w) {
    Eigen::VectorXd rhs(n + m);
    rhs.head(n) = rho_x * w.head(n);
    rhs.tail(m) = -rho_y * w.segment(n, m);
    const Eigen::VectorXd z_w = kkt.solve(rhs);
    const double tau =
        (w[n + m] + c.dot(z_w.head(n)) + b.dot(z_w.tail(m))) / denom;
    Eigen::VectorXd out(n + m + 1);
    out.head(n + m) = z_w - tau * z_h;
    out[n + m] = tau;
    return out;
  };

  const double alpha = opts.over_relaxation;
  Eigen::VectorXd y_seg(m);

  const int dim = n + m + 1;
  // State of the splitting is the single vector w; (u, v) is its Moreau
  // pair u = proj_C(w), v = w - u, re-derived by every step.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  w[dim - 1] = 2.0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  u[dim - 1] = 1.0;
  v[dim - 1] = 1.0;

  auto moreau_split = [&](const Eigen::VectorXd& w_in, Eigen::VectorXd& u_out,
                          Eigen::VectorXd& v_out) {
    u_out = w_in;
    y_seg = u_out.segment(n, m);
    project_cone_inplace(y_seg, sf.cones, /*dual=*/true, opts.parallel);
    u_out.segment(n, m) = y_seg;
    u_out[dim - 1] = std::max(u_out[dim - 1], 0.0);
    v_out = w_in - u_out;
  };

  // One splitting step from (w, u, v); the outputs are again a Moreau pair.
  auto splitting_step = [&](const Eigen::VectorXd& w_in,
                            const Eigen::VectorXd& u_in,
                            const Eigen::VectorXd& v_in, Eigen::VectorXd& w_out,
                            Eigen::VectorXd& u_out, Eigen::VectorXd& v_out) {
    const Eigen::VectorXd u_tilde = solve_iq(w_in);
    const Eigen::VectorXd u_rel = alpha * u_tilde + (1.0 - alpha) * u_in;
    u_out = u_rel - v_in;
    y_seg = u_out.segment(n, m);
    project_cone_inplace(y_seg, sf.cones, /*dual=*/true, opts.parallel);
    u_out.segment(n, m) = y_seg;
    u_out[dim - 1] = std::max(u_out[dim - 1], 0.0);
    v_out = v_in + u_out - u_rel;
    w_out = u_out + v_out;
  };

  ConicSolution best;
  best.x = Eigen::VectorXd::Zero(n);
  best.y = Eigen::VectorXd::Zero(m);
  best.s = Eigen::VectorXd::Zero(m);
  double best_metric = std::numeric_limits<double>::infinity();

  // An accepted candidate costs one extra splitting step, so after a
  // rejection the next attempts are skipped for a cooldown window.
  constexpr int kAaCooldown = 10;
  const double safeguard = opts.aa_safeguard * opts.aa_safeguard;
  AndersonAccelerator aa(dim, opts.aa_memory);
  int aa_cooldown = 0;
  long aa_attempts = 0, aa_accepts = 0;
  Eigen::VectorXd w_next(dim), u_next(dim), v_next(dim);
  Eigen::VectorXd w_aa(dim), u_aa(dim), v_aa(dim), w_aa_next(dim);
  Eigen::VectorXd u_tmp(dim), v_tmp(dim);
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    splitting_step(w, u, v, w_next, u_next, v_next);
    if (opts.aa_memory > 0) aa.push(w, w_next);

    bool accepted = false;
    if (aa.ready() && aa_cooldown == 0) {
      ++aa_attempts;
      w_aa = aa.candidate();
      moreau_split(w_aa, u_tmp, v_tmp);
      splitting_step(w_aa, u_tmp, v_tmp, w_aa_next, u_aa, v_aa);
      if ((w_aa_next - w_aa).squaredNorm() <
          safeguard * (w_next - w).squaredNorm()) {
        w = w_aa_next;
        u = u_aa;
        v = v_aa;
        aa.push(w_aa, w_aa_next);
        accepted = true;
        ++aa_accepts;
      } else {
        aa_cooldown = kAaCooldown;
        aa.reset();
      }
    }
    if (!accepted) {
      w = w_next;
      u = u_next;
      v = v_next;
      if (aa_cooldown > 0) --aa_cooldown;
    }

    if (iter % opts.check_interval != 0 && iter != opts.max_iters) continue;
    const double tau = u[dim - 1];
    if (tau <= 1e-12) continue;

    ConicSolution cand;
    cand.x = col_scale.asDiagonal() * (u.head(n) / (tau * sigma_b));
    cand.y = row_scale.asDiagonal() * (u.segment(n, m) / (tau * sigma_c));
    cand.s = (v.segment(n, m) / (tau * sigma_b)).cwiseQuotient(row_scale);
    cand.residuals = compute_residuals(sf, cand.x, cand.y, cand.s);
    cand.iterations = iter;
    cand.objective = sf.c.dot(cand.x);
    if (opts.verbose) {
      std::printf("iter %6d  pri %.3e  dua %.3e  gap %.3e  aa %ld/%ld\n",
                  iter, cand.residuals.primal, cand.residuals.dual,
                  cand.residuals.gap, aa_accepts, aa_attempts);
    }

    const double metric = std::max(
        {cand.residuals.primal, cand.residuals.dual, cand.residuals.gap});
    if (metric < best_metric) {
      best_metric = metric;
      best = cand;
    }
    if (cand.residuals.primal <= opts.eps_primal &&
        cand.residuals.dual <= opts.eps_dual &&
        cand.residuals.gap <= opts.eps_gap) {
      cand.status = SolveStatus::kOptimal;
      return cand;
    }
  }

  best.status = SolveStatus::kMaxIters;
  return best;
}

}  // namespace msoc
