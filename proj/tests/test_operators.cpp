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

#include <random>

#include <fcrkpm/operators.hpp>

#include "support.hpp"

using namespace fcrkpm;

namespace {

RealField random_domain(const Discretization& d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return d.sample_domain([&](const Point&) { return u(rng); });
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("stiffness energy of a linear field is |grad u|^2 |Omega|") {
  // Implicit gradients are exact on linear fields, so d.K d is the nodal
  // sum of V |c|^2 = |c|^2 * area.
  for (int dim = 1; dim <= 3; ++dim) {
    const auto d = test::box(dim, dim == 3 ? 12 : 24);
    const std::array<double, 3> c{0.5, -2.0, 1.25};
    const RealField lin = d->sample_domain([&](const Point& x) { return 3.0 + c[0] * x[0] + c[1] * x[1] + c[2] * x[2]; });
    double c2 = 0.0;
    for (int k = 0; k < dim; ++k) c2 += c[k] * c[k];
    CHECK(dot(lin, d->ops().internal_force(lin)) == doctest::Approx(c2 * std::pow(2.0, dim)).epsilon(1e-11));
  }
}

TEST_CASE("source forces sum to the trapezoid integral of the source") {
  const auto d = test::box(2, 20);
  const RealField r = d->sample_domain([](const Point& x) { return x[0] * x[0] + std::sin(x[1]); });
  double trapezoid = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) trapezoid += d->volume()[i] * r[i];
  CHECK(sum(d->ops().external_force(r)) == doctest::Approx(trapezoid).epsilon(1e-12));
  CHECK(sum(d->ops().lumped_mass()) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("quadratic basis reproduces quadratics") {
  const auto d = test::box(2, 16, 2.5, 2);
  const RealField q = d->sample_domain([](const Point& x) { return x[0] * x[0] - 0.5 * x[0] * x[1] + x[1]; });
  const RealField u = d->ops().evaluate_field(q);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (d->masks().chi[i] != 0.0) CHECK(std::abs(u[i] - q[i]) < 1e-10);
  }
  const auto grad = d->ops().implicit_gradient(q);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (d->masks().chi[i] == 0.0) continue;
    const Point x = d->grid().coordinate(i);
    CHECK(grad[0][i] == doctest::Approx(2.0 * x[0] - 0.5 * x[1]).epsilon(1e-8));
    CHECK(grad[1][i] == doctest::Approx(1.0 - 0.5 * x[0]).epsilon(1e-8));
  }
}

TEST_CASE("outputs vanish on the padding") {
  const auto d = test::box(2, 16);
  const RealField v = random_domain(*d, 3);
  for (const RealField& f : {d->ops().internal_force(v), d->ops().external_force(v), d->ops().evaluate_field(v),
                             d->ops().mass_force(v)}) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (d->masks().chi[i] == 0.0) CHECK(f[i] == 0.0);
    }
  }
}

TEST_CASE("gradient-paired nonlinear force with n = grad u_h reproduces f_int") {
  const auto d = test::box(2, 16);
  const RealField v = random_domain(*d, 4);
  const auto grad = d->ops().implicit_gradient(v);
  const RealField a = d->ops().nonlinear_force_gradient(grad);
  const RealField b = d->ops().internal_force(v);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12 * max_abs(b));
  const RealField c = d->ops().nonlinear_force_scalar(v);
  const RealField e = d->ops().external_force(v);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == e[i]);
}

TEST_CASE("consistent mass is symmetric positive") {
  const auto d = test::box(3, 10);
  const RealField a = random_domain(*d, 5);
  const RealField b = random_domain(*d, 6);
  const double ab = dot(a, d->ops().mass_force(b));
  const double ba = dot(b, d->ops().mass_force(a));
  CHECK(std::abs(ab - ba) < 1e-13 * std::abs(ab) + 1e-15);
  CHECK(dot(a, d->ops().mass_force(a)) > 0.0);
}

TEST_CASE("mismatched inputs are rejected") {
  const auto d = test::box(1, 16);
  const RealField wrong(Shape{1, {17, 1, 1}});
  CHECK_THROWS_AS(d->ops().internal_force(wrong), ShapeMismatch);
  CHECK_THROWS_AS(d->ops().boundary_force(d->grid().make_field(), wrong), ShapeMismatch);
}

TEST_CASE("persistent bytes cover the precomputation and the spectra") {
  const auto d = test::box(2, 16);
  const std::size_t spectra = 2 * 3 * half_shape(d->grid().shape()).size() * sizeof(Complex);
  CHECK(d->ops().persistent_bytes() == d->precomp().persistent_bytes() + spectra);
}

}  // TEST_SUITE
