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

#include "msoc/poly.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "msoc/errors.hpp"

namespace msoc {

Polynomial::Polynomial(double constant) {
  if (constant != 0.0) terms_[{0, 0}] = constant;
}

Polynomial::Polynomial(TermMap terms) : terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0.0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  check_degree_cap();
}

Polynomial Polynomial::monomial(int i, int j, double coeff) {
  Polynomial p;
  if (coeff != 0.0) p.terms_[{i, j}] = coeff;
  p.check_degree_cap();
  return p;
}

Polynomial Polynomial::x(int power) { return monomial(power, 0); }

Polynomial Polynomial::u(int power) { return monomial(0, power); }

double Polynomial::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? 0.0 : it->second;
}

int Polynomial::degree_x() const {
  int d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.i);
  return d;
}

int Polynomial::degree_u() const {
  int d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.j);
  return d;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [key, c] : r.terms_) c = -c;
  return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [key, c] : b.terms_) {
    double& slot = r.terms_[key];
    slot += c;
    if (slot == 0.0) r.terms_.erase(key);
  }
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + (-b);
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      Monomial key{ka.i + kb.i, ka.j + kb.j};
      double& slot = r.terms_[key];
      slot += ca * cb;
      if (slot == 0.0) r.terms_.erase(key);
    }
  }
  r.check_degree_cap();
  return r;
}

Polynomial operator*(double s, const Polynomial& a) {
  Polynomial r;
  if (s == 0.0) return r;
  r.terms_ = a.terms_;
  for (auto& [key, c] : r.terms_) c *= s;
  return r;
}

Polynomial Polynomial::pow(int r) const {
  Polynomial acc(1.0);
  for (int k = 0; k < r; ++k) acc = acc * (*this);
  return acc;
}

Polynomial Polynomial::d_dx() const {
  Polynomial r;
  for (const auto& [key, c] : terms_) {
    if (key.i == 0) continue;
    r.terms_[{key.i - 1, key.j}] = c * key.i;
  }
  return r;
}

Polynomial Polynomial::d2_dx2() const { return d_dx().d_dx(); }

double Polynomial::eval(double x, double u) const {
  // Group coefficients by u power, Horner in x within each group.
  double total = 0.0;
  double u_pow = 1.0;
  int current_j = 0;
  auto it = terms_.begin();
  while (it != terms_.end()) {
    const int j = it->first.j;
    // Dense x-coefficient vector for this u power.
    std::vector<double> cx;
    for (; it != terms_.end() && it->first.j == j; ++it) {
      if (static_cast<int>(cx.size()) <= it->first.i) cx.resize(it->first.i + 1, 0.0);
      cx[it->first.i] = it->second;
    }
    double hx = 0.0;
    for (auto c = cx.rbegin(); c != cx.rend(); ++c) hx = hx * x + *c;
    while (current_j < j) {
      u_pow *= u;
      ++current_j;
    }
    total += hx * u_pow;
  }
  return total;
}

void Polynomial::check_degree_cap() const {
  if (degree_x() > kDegreeCap || degree_u() > kDegreeCap) {
    throw DegreeError("polynomial degree exceeds cap " +
                      std::to_string(kDegreeCap));
  }
}

namespace {

std::string format_coeff(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", c);
  return buf;
}

std::string monomial_name(const Monomial& m) {
  std::string s;
  if (m.i == 1) s += "x";
  else if (m.i > 1) s += "x^" + std::to_string(m.i);
  if (m.j >= 1) {
    if (!s.empty()) s += " ";
    s += m.j == 1 ? "u" : "u^" + std::to_string(m.j);
  }
  return s;
}

}  // namespace

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [key, c] : p.terms()) {
    const double mag = std::abs(c);
    if (out.empty()) {
      out += c < 0 ? "-" : "";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    const std::string name = monomial_name(key);
    if (name.empty()) {
      out += format_coeff(mag);
    } else if (mag == 1.0) {
      out += name;
    } else {
      out += format_coeff(mag) + " " + name;
    }
  }
  return out;
}

}  // namespace msoc
