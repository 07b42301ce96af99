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

#ifndef MSOC_TESTS_TEST_UTIL_HPP
#define MSOC_TESTS_TEST_UTIL_HPP

#include <random>

#include "msoc/poly.hpp"

namespace msoc::testing {

// Fixed-seed generators for hand-rolled property tests.
inline std::mt19937_64 make_rng(std::uint64_t seed = 0x5eed) {
  return std::mt19937_64(seed);
}

inline double random_real(std::mt19937_64& rng, double lo = -3.0,
                          double hi = 3.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Polynomial random_poly(std::mt19937_64& rng, int max_dx = 3,
                              int max_du = 2, bool integer_coeffs = false) {
  std::uniform_int_distribution<int> nterms(1, 5);
  std::uniform_int_distribution<int> dx(0, max_dx), du(0, max_du);
  std::uniform_int_distribution<int> int_coeff(-4, 4);
  Polynomial p;
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    const double c =
        integer_coeffs ? static_cast<double>(int_coeff(rng)) : random_real(rng);
    p = p + Polynomial::monomial(dx(rng), du(rng), c);
  }
  return p;
}

}  // namespace msoc::testing

#endif  // MSOC_TESTS_TEST_UTIL_HPP
