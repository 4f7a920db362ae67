// Copyright 2026 The fcrkpm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <array>
#include <vector>

#include <fcrkpm/basis.hpp>

#include "support.hpp"

using namespace fcrkpm;

TEST_SUITE("basis") {

TEST_CASE("monomials are graded by degree, then x, then y") {
  const BasisIndex b = enumerate_basis(2, 3);
  const std::vector<std::array<int, 3>> expected{
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
      {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2},
  };
  CHECK(b.exponents == expected);
  CHECK(b.linear_position(0) == 1);
  CHECK(b.linear_position(2) == 3);
}

TEST_CASE("basis sizes are binomial coefficients") {
  CHECK(enumerate_basis(1, 1).size() == 2);
  CHECK(enumerate_basis(1, 2).size() == 3);
  CHECK(enumerate_basis(1, 3).size() == 4);
  CHECK(enumerate_basis(2, 1).size() == 3);
  CHECK(enumerate_basis(2, 2).size() == 6);
  CHECK(enumerate_basis(2, 3).size() == 10);
  CHECK(enumerate_basis(3, 3).size() == 20);
  CHECK_THROWS_AS(enumerate_basis(1, 4), InvalidArgument);
}

TEST_CASE("monomial evaluation") {
  const BasisIndex b = enumerate_basis(2, 2);
  const Point x{2.0, -3.0, 0.0};
  std::vector<double> h(6);
  b.evaluate_all(x, h);
  CHECK(h == std::vector<double>{1.0, 2.0, -3.0, 4.0, -6.0, 9.0});
}

TEST_CASE("cubic B-spline profile values") {
  const double a = 0.8;
  CHECK(eval_kernel_1d(0.0, a) == doctest::Approx(2.0 / 3.0));
  CHECK(eval_kernel_1d(0.5 * a, a) == doctest::Approx(1.0 / 6.0));
  CHECK(eval_kernel_1d(-0.75 * a, a) == doctest::Approx(1.0 / 48.0));
  CHECK(eval_kernel_1d(a, a) == 0.0);
  CHECK(eval_kernel_1d(1.5 * a, a) == 0.0);
  // Both branches agree at z = 1/2, and so do their slopes (-1 / a from each side).
  const double e = 1e-7 * a;
  const double left = (eval_kernel_1d(0.5 * a, a) - eval_kernel_1d(0.5 * a - e, a)) / e;
  const double right = (eval_kernel_1d(0.5 * a + e, a) - eval_kernel_1d(0.5 * a, a)) / e;
  CHECK(left == doctest::Approx(-1.0 / a).epsilon(1e-5));
  CHECK(right == doctest::Approx(-1.0 / a).epsilon(1e-5));
}

TEST_CASE("kernel integrates to half its support") {
  // Composite Simpson over [-a, a]; the profile is piecewise cubic, so the
  // rule is exact on each piece once the breakpoints are nodes.
  const double a = 1.3;
  const int n = 400;
  const double h = 2.0 * a / n;
  double s = eval_kernel_1d(-a, a) + eval_kernel_1d(a, a);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * eval_kernel_1d(-a + i * h, a);
  CHECK(s * h / 3.0 == doctest::Approx(0.5 * a).epsilon(1e-12));
}

TEST_CASE("kernel support test is strict") {
  KernelSpec k;
  k.dim = 2;
  k.support = {0.5, 0.25, 1.0};
  CHECK(k.covers({0.49, -0.24, 0}));
  CHECK_FALSE(k.covers({0.5, 0.0, 0}));
  CHECK_FALSE(k.covers({0.0, -0.25, 0}));
  CHECK(k({0.0, 0.0, 0}) == doctest::Approx(4.0 / 9.0));
}

TEST_CASE("selectors") {
  const BasisIndex b = enumerate_basis(1, 3);
  CHECK(value_selector(b) == std::vector<double>{1, 0, 0, 0});
  CHECK(gradient_selector(1, b) == std::vector<double>{0, 0, -1, 0});
  CHECK_THROWS_AS(gradient_selector(0, enumerate_basis(0, 2)), InvalidArgument);
  CHECK_THROWS_AS(gradient_selector(2, enumerate_basis(1, 2)), InvalidArgument);
}

TEST_CASE("basis table arrays are seam-adjusted and mirrored") {
  const auto d = test::box(2, 16, 2.5, 2);
  const BasisTable& t = d->table();
  const PeriodicGrid& g = d->grid();
  const Shape& s = g.shape();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = s.unravel(i);
    std::array<int, 3> mirror{0, 0, 0};
    for (int k = 0; k < 2; ++k) mirror[k] = (s.n[k] - idx[k]) % s.n[k];
    const std::size_t j = s.linear(mirror);
    const Point xi = g.wrap_coordinate(i);
    for (int p = 0; p < t.size(); ++p) {
      CHECK(t.reflected[p][i] == t.weighted[p][j]);
      CHECK(t.weighted[p][i] == doctest::Approx(t.monomial[p][i] * t.kernel(xi)).epsilon(1e-15));
    }
  }
  // Support is compact: nothing beyond a_tilde spacings from the origin.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point xi = g.wrap_coordinate(i);
    if (!t.kernel.covers(xi)) CHECK(t.weighted[0][i] == 0.0);
  }
}

TEST_CASE("kernels reaching half the period are refused") {
  const PeriodicGrid g(1, {0, 0, 0}, {1, 1, 1}, {8, 1, 1});
  const std::vector<double> a{4.0};
  CHECK_THROWS_AS(build_basis_table(g, enumerate_basis(1, 1), make_kernel(g, a)), InvalidArgument);
}

}  // TEST_SUITE
