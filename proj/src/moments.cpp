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

#include "msoc/moments.hpp"

#include <cstdio>

#include "msoc/errors.hpp"

namespace msoc {

std::string key_name(const MomentKey& key) {
  if (key.i == 0 && key.j == 0) return "1";
  std::string inner;
  if (key.i == 1) inner += "x";
  else if (key.i > 1) inner += "x^" + std::to_string(key.i);
  if (key.j >= 1) {
    if (!inner.empty()) inner += " ";
    inner += key.j == 1 ? "u" : "u^" + std::to_string(key.j);
  }
  return "mu[" + inner + "]";
}

void LinearMomentExpr::add(const MomentKey& key, double coeff) {
  if (key.i == 0 && key.j == 0) {
    constant_ += coeff;
    return;
  }
  double& slot = terms_[key];
  slot += coeff;
  if (slot == 0.0) terms_.erase(key);
}

double LinearMomentExpr::coeff(const MomentKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? 0.0 : it->second;
}

LinearMomentExpr linearize(const Polynomial& p) {
  LinearMomentExpr expr;
  for (const auto& [key, c] : p.terms()) expr.add(key, c);
  return expr;
}

LinearMomentExpr generator_apply(int q_degree, const Polynomial& f,
                                 const Polynomial& g) {
  const int k = q_degree;
  // Generator applied to q(x) = x^k:  k x^{k-1} f + (k(k-1)/2) x^{k-2} g^2.
  Polynomial p = static_cast<double>(k) * (Polynomial::x(k - 1) * f);
  if (k >= 2) {
    p = p + (0.5 * k * (k - 1)) * (Polynomial::x(k - 2) * (g * g));
  }
  return linearize(p);
}

MomentSystem build_system(int K, const Polynomial& f, const Polynomial& g) {
  MomentSystem system;
  system.K = K;
  system.rhs.reserve(K);
  for (int k = 1; k <= K; ++k) {
    LinearMomentExpr expr = generator_apply(k, f, g);
    for (const auto& [key, c] : expr.terms()) system.required_keys.insert(key);
    system.rhs.push_back(std::move(expr));
  }
  return system;
}

bool is_closed(const MomentSystem& system) {
  for (const auto& key : system.required_keys) {
    if (key.j == 0 && key.i > system.K) return false;
  }
  return true;
}

std::vector<MomentKey> matrix_basis(int d_x, int d_u) {
  std::vector<MomentKey> basis;
  basis.push_back({0, 0});
  for (int a = 1; a <= d_x; ++a) basis.push_back({a, 0});
  for (int b = 1; b <= d_u; ++b) basis.push_back({0, b});
  return basis;
}

std::set<MomentKey> matrix_index_set(int d_x, int d_u) {
  std::set<MomentKey> keys;
  const auto basis = matrix_basis(d_x, d_u);
  for (const auto& a : basis) {
    for (const auto& b : basis) keys.insert({a.i + b.i, a.j + b.j});
  }
  return keys;
}

namespace {

bool keys_in_set(const LinearMomentExpr& expr, const std::set<MomentKey>& set) {
  for (const auto& [key, c] : expr.terms()) {
    if (!set.contains(key)) return false;
  }
  return true;
}

}  // namespace

SizingResult auto_size(int d_x, int d_u, const Polynomial& f,
                       const Polynomial& g,
                       const std::vector<Polynomial>& constraints) {
  const auto index_set = matrix_index_set(d_x, d_u);
  SizingResult result;

  // Grow K while the k-th ODE and its own left-hand moment still fit.
  for (int k = 1; k <= 2 * d_x; ++k) {
    if (!index_set.contains({k, 0})) break;
    if (!keys_in_set(generator_apply(k, f, g), index_set)) break;
    result.K = k;
  }
  if (result.K < 1) {
    throw SizingError(
        "moment matrix d_x=" + std::to_string(d_x) + ", d_u=" +
        std::to_string(d_u) + " cannot hold even the first moment equation");
  }

  const int r_cap = 2 * (d_x + d_u);
  for (std::size_t l = 0; l < constraints.size(); ++l) {
    int r_best = 0;
    for (int r = 1; r <= r_cap; ++r) {
      if (!keys_in_set(linearize(constraints[l].pow(r)), index_set)) break;
      r_best = r;
    }
    if (r_best < 1) {
      throw SizingError("constraint " + std::to_string(l + 1) +
                        " does not fit the moment matrix at power 1");
    }
    result.r.push_back(r_best);
  }
  return result;
}

namespace {

std::string format_coeff(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", c);
  return buf;
}

}  // namespace

std::string format_expr(const LinearMomentExpr& expr) {
  std::string out;
  auto append = [&out](double c, const std::string& name) {
    const double mag = c < 0 ? -c : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (name.empty()) {
      out += format_coeff(mag);
    } else if (mag == 1.0) {
      out += name;
    } else {
      out += format_coeff(mag) + " " + name;
    }
  };
  for (const auto& [key, c] : expr.terms()) append(c, key_name(key));
  if (expr.constant() != 0.0 || expr.terms().empty()) {
    append(expr.constant(), "");
  }
  return out;
}

std::string format_system(const MomentSystem& system) {
  std::string out;
  for (int k = 1; k <= system.K; ++k) {
    out += "dmu[x^" + std::to_string(k) + "]/dt = " +
           format_expr(system.rhs[k - 1]) + "\n";
  }
  return out;
}

}  // namespace msoc
