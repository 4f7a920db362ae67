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

#include <cmath>
#include <random>

#include <fcrkpm/manufactured.hpp>

#include "support.hpp"

using namespace fcrkpm;

namespace {

double laplacian_fd(const std::function<double(const Point&)>& u, const Point& x, int dim) {
  const double h = 1e-4;
  double lap = 0.0;
  for (int k = 0; k < dim; ++k) {
    Point p = x;
    Point m = x;
    p[k] += h;
    m[k] -= h;
    lap += (u(p) - 2.0 * u(x) + u(m)) / (h * h);
  }
  return lap;
}

}  // namespace

TEST_SUITE("manufactured") {

TEST_CASE("Poisson sources match the exact solutions") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int dim = 1; dim <= 3; ++dim) {
    const ManufacturedCase c = poisson_case(dim);
    CHECK(c.dim == dim);
    CHECK(c.domain.volume() == doctest::Approx(std::pow(2.0, dim)));
    for (int t = 0; t < 20; ++t) {
      const Point x{u(rng), dim > 1 ? u(rng) : 0.0, dim > 2 ? u(rng) : 0.0};
      CHECK(-laplacian_fd(c.exact, x, dim) == doctest::Approx(c.source(x)).epsilon(1e-5));
    }
    Point corner{1.0, dim > 1 ? -1.0 : 0.0, 0.0};
    CHECK(c.exact(corner) == 0.0);
    CHECK(c.dirichlet(corner) == 0.0);
  }
}

TEST_CASE("cubic reaction source matches its exact solution") {
  const ManufacturedCase c = cubic_reaction_case();
  for (double x : {-0.9, -0.3, 0.0, 0.41, 0.87}) {
    const Point p{x, 0, 0};
    const double v = c.exact(p);
    CHECK(-laplacian_fd(c.exact, p, 1) + v * v * v == doctest::Approx(c.source(p)).epsilon(1e-6));
  }
}

TEST_CASE("nodal error norms are normalized by the exact solution") {
  const Shape s{1, {4, 1, 1}};
  const RealField exact(s, std::vector<double>{1.0, -2.0, 2.0, 100.0});
  const RealField uh(s, std::vector<double>{1.5, -2.0, 2.0, 0.0});
  const RealField chi(s, std::vector<double>{1.0, 1.0, 1.0, 0.0});
  const ErrorReport e = nodal_errors(uh, exact, chi);
  CHECK(e.l2 == doctest::Approx(std::sqrt(0.25 / 9.0)));
  CHECK(e.linf == doctest::Approx(0.25));
  CHECK_THROWS_AS(nodal_errors(uh, RealField(s), chi), InvalidArgument);
}

TEST_CASE("slope fit uses the finest points") {
  std::vector<std::pair<double, double>> pts;
  for (double h : {0.5, 0.25, 0.125, 0.0625, 0.03125}) pts.emplace_back(h, 3.0 * h * h);
  pts[0].second = 10.0;  // pre-asymptotic outlier outside the tail
  CHECK(convergence_slope(pts) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(convergence_slope(pts, 5) > 2.2);
}

TEST_CASE("continuous L2 error of a reproduced linear field") {
  const auto d = test::box(1, 16);
  const auto ref = d->make_reference();
  std::vector<double> coeff;
  for (const Point& x : ref->nodes().x) coeff.push_back(x[0]);
  // u_h = x exactly, so the error against x + 0.1 is 0.1 over length 2.
  const double e = continuous_l2_error_1d(*ref, coeff, [](double x) { return x + 0.1; });
  CHECK(e == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
}

}  // TEST_SUITE
