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

#ifndef MSOC_POLY_HPP
#define MSOC_POLY_HPP

#include <map>
#include <string>

namespace msoc {

// Exponent pair of the monomial x^i u^j. Ordering puts pure-x terms first
// (ascending power), then terms with increasing u power; this is the
// canonical display and serialization order everywhere in the toolkit.
struct Monomial {
  int i = 0;  // power of the state x
  int j = 0;  // power of the control u

  friend constexpr bool operator==(const Monomial&, const Monomial&) = default;
  friend constexpr bool operator<(const Monomial& a, const Monomial& b) {
    if (a.j != b.j) return a.j < b.j;
    return a.i < b.i;
  }
};

// Sparse bivariate polynomial in (x, u) with double coefficients.
//
// Terms with coefficient exactly 0 are never stored, so two polynomials are
// equal iff their term maps are equal. Values are immutable after
// construction and safe to share across threads.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double>;

  // Degrees above this cap abort a runaway product chain early.
  static constexpr int kDegreeCap = 32;

  Polynomial() = default;
  explicit Polynomial(double constant);
  explicit Polynomial(TermMap terms);

  static Polynomial monomial(int i, int j, double coeff = 1.0);
  static Polynomial x(int power = 1);
  static Polynomial u(int power = 1);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double coeff(int i, int j) const;

  int degree_x() const;
  int degree_u() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& a);

  Polynomial pow(int r) const;

  // Formal partial derivatives in x.
  Polynomial d_dx() const;
  Polynomial d2_dx2() const;

  // Horner evaluation in x for each u power, accumulated over ascending
  // powers of u.
  double eval(double x, double u) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void check_degree_cap() const;

  TermMap terms_;
};

// Stable human-readable rendering, e.g. "2.25 x - x^3 + u".
std::string to_string(const Polynomial& p);

}  // namespace msoc

#endif  // MSOC_POLY_HPP
