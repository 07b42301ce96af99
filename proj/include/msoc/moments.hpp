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

#ifndef MSOC_MOMENTS_HPP
#define MSOC_MOMENTS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "msoc/poly.hpp"

namespace msoc {

// The pair (i, j) names the moment mu^{x^i u^j} = <x^i u^j>.
// (0, 0) is the constant moment, identically 1; it is substituted out at
// expression-build time and never becomes a program variable.
using MomentKey = Monomial;

// Stable textual name for a moment, e.g. "mu[x^2 u]", "mu[u^2]", "1".
std::string key_name(const MomentKey& key);

// Real-valued affine function of moments, canonical (no zero coefficients).
class LinearMomentExpr {
 public:
  LinearMomentExpr() = default;

  void add(const MomentKey& key, double coeff);
  void add_constant(double c) { constant_ += c; }

  const std::map<MomentKey, double>& terms() const { return terms_; }
  double constant() const { return constant_; }
  double coeff(const MomentKey& key) const;

  // Value of the expression given a moment lookup.
  template <typename Lookup>
  double evaluate(Lookup&& moment_of) const {
    double v = constant_;
    for (const auto& [key, c] : terms_) v += c * moment_of(key);
    return v;
  }

  friend bool operator==(const LinearMomentExpr&,
                         const LinearMomentExpr&) = default;

 private:
  std::map<MomentKey, double> terms_;
  double constant_ = 0.0;
};

// Moment-linearization of a polynomial: each monomial x^a u^b maps to the
// moment mu^{x^a u^b}, with the constant term folded into the scalar part.
LinearMomentExpr linearize(const Polynomial& p);

// Affine moment expression for d<x^k>/dt under dx = f dt + g dw:
//   k sum f_ij mu^{x^{i+k-1} u^j}
//   + (k(k-1)/2) sum g_ij g_rs mu^{x^{i+r+k-2} u^{j+s}}.
LinearMomentExpr generator_apply(int q_degree, const Polynomial& f,
                                 const Polynomial& g);

// The first K state-moment ODEs and every moment key they reference.
struct MomentSystem {
  int K = 0;
  std::vector<LinearMomentExpr> rhs;  // rhs[k-1] is d mu^{x^k} / dt
  std::set<MomentKey> required_keys;
};

MomentSystem build_system(int K, const Polynomial& f, const Polynomial& g);

// True when no state-moment ODE references a state power above K. Mixed
// moments with j >= 1 are control moments and never break closure.
bool is_closed(const MomentSystem& system);

// Distinct entries of the (1 + d_x + d_u)^2 outer-product moment matrix.
std::set<MomentKey> matrix_index_set(int d_x, int d_u);

// Monomial basis vector (1, x, ..., x^{d_x}, u, ..., u^{d_u}).
std::vector<MomentKey> matrix_basis(int d_x, int d_u);

struct SizingResult {
  int K = 0;
  std::vector<int> r;  // one entry per inequality constraint
};

// Largest K and r_l such that every moment referenced by the K moment ODEs
// and by the expanded constraint powers <b_l^r> lies in the moment matrix.
// Throws SizingError when even K = 1 (or r_l = 1) does not fit.
SizingResult auto_size(int d_x, int d_u, const Polynomial& f,
                       const Polynomial& g,
                       const std::vector<Polynomial>& constraints);

// Debug dump of the ODE system, one line per k:
//   dmu[x^k]/dt = <terms>
// The format is stable and used by golden tests.
std::string format_system(const MomentSystem& system);
std::string format_expr(const LinearMomentExpr& expr);

}  // namespace msoc

#endif  // MSOC_MOMENTS_HPP
