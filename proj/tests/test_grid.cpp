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

#include <fcrkpm/grid.hpp>

#include "support.hpp"

using namespace fcrkpm;
using fcrkpm::test::WarningCapture;

TEST_SUITE("grid") {

TEST_CASE("fixed-count extension keeps the domain on lattice nodes") {
  const std::vector<double> length{2.0};
  const std::vector<double> a{1.5};
  const std::vector<int> count{16};
  const ExtensionPlan p = plan_extension_fixed_count(length, a, count);
  CHECK(p.m[0] == 1);
  // (m + 1) L / (N - m - 1) = 2 * 2 / 14
  CHECK(p.extension[0] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
  CHECK(p.spacing[0] == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(p.omega_count(0) == 15);
  CHECK(p.period(0) == doctest::Approx(16.0 / 7.0).epsilon(1e-15));
  CHECK(p.support(0) == doctest::Approx(1.5 / 7.0).epsilon(1e-15));
  // Extension covers the kernel support plus one spacing.
  CHECK(p.extension[0] > p.support(0));
}

TEST_CASE("fixed-spacing extension snaps the spacing and reports odd sizes") {
  WarningCapture w;
  const std::vector<double> length{2.0, 2.0};
  const std::vector<double> a{2.5, 2.5};
  const std::vector<double> h{0.3, 0.25};
  const ExtensionPlan p = plan_extension_fixed_spacing(length, a, h);
  CHECK(p.spacing[0] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
  CHECK(p.count[0] == 7 + 3);
  CHECK(p.spacing[1] == 0.25);
  CHECK(p.count[1] == 8 + 3);
  CHECK(p.extension[1] == doctest::Approx(0.75));
  CHECK(w.contains("adjusted"));
  CHECK(w.contains("not a power of two"));
}

TEST_CASE("extension planning rejects bad requests") {
  const std::vector<double> length{2.0};
  const std::vector<int> few{2};
  const std::vector<double> small_a{0.5};
  const std::vector<double> a{1.5};
  CHECK_THROWS_AS(plan_extension_fixed_count(length, a, few), InvalidArgument);
  const std::vector<int> ok{16};
  CHECK_THROWS_AS(plan_extension_fixed_count(length, small_a, ok), InvalidArgument);
  const std::vector<double> fractional{16.5};
  CHECK_THROWS_AS(plan_extension(length, a, ExtensionMode::FixCount, fractional), InvalidArgument);
}

TEST_CASE("signed offsets wrap to the minimal image") {
  const PeriodicGrid g(1, {0, 0, 0}, {1, 1, 1}, {8, 1, 1});
  CHECK(g.signed_offset(0, 0) == 0);
  CHECK(g.signed_offset(1, 0) == 1);
  CHECK(g.signed_offset(3, 0) == 3);
  CHECK(g.signed_offset(5, 0) == -3);
  CHECK(g.signed_offset(7, 0) == -1);
  CHECK(g.wrap_coordinate(7)[0] == doctest::Approx(-0.125));
}

TEST_CASE("box masks partition the domain into free and Dirichlet nodes") {
  const auto d = test::box(2, 16);
  const MaskSet& m = d->masks();
  CHECK(is_mask(m.chi));
  CHECK(is_mask(m.gamma_g));
  CHECK(is_mask(m.omega));
  CHECK(sum(m.chi) == 225.0);        // 15 x 15 lattice nodes on [-1, 1]^2
  CHECK(sum(m.gamma_g) == 56.0);     // 4 x 14 boundary nodes
  CHECK(sum(m.omega) == 169.0);      // 13 x 13 interior nodes
  for (std::size_t i = 0; i < m.chi.size(); ++i) CHECK(m.omega[i] == m.chi[i] - m.gamma_g[i]);
}

TEST_CASE("Dirichlet nodes outside the domain are rejected") {
  const PeriodicGrid g(1, {0, 0, 0}, {1, 1, 1}, {8, 1, 1});
  CHECK_THROWS_AS(build_masks(
                      g, [](const Point& x) { return x[0] < 0.5; },
                      [](const Point& x) { return x[0] > 0.8; }),
                  InvalidArgument);
}

TEST_CASE("trapezoid weights integrate constants exactly") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto d = test::box(dim, 12);
    CHECK(sum(d->volume()) == doctest::Approx(std::pow(2.0, dim)).epsilon(1e-13));
    // Corner node carries a 2^-dim share of the cell.
    const double h = d->grid().spacing(0);
    double corner = 0.0;
    for (std::size_t i = 0; i < d->grid().size(); ++i) {
      const Point x = d->grid().coordinate(i);
      bool is_corner = true;
      for (int k = 0; k < dim; ++k) is_corner = is_corner && std::abs(std::abs(x[k]) - 1.0) < 1e-12;
      if (is_corner) corner = d->volume()[i];
    }
    CHECK(corner == doctest::Approx(std::pow(h / 2.0, dim)).epsilon(1e-13));
  }
}

TEST_CASE("face weights sum to the face measure") {
  const auto d = test::box(2, 16);
  const std::vector<BoxFace> one{{0, 1}};
  CHECK(sum(face_weights(d->grid(), d->box(), one)) == doctest::Approx(2.0).epsilon(1e-13));
  const std::vector<BoxFace> all{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(sum(face_weights(d->grid(), d->box(), all)) == doctest::Approx(8.0).epsilon(1e-13));

  const auto d3 = test::box(3, 10);
  const std::vector<BoxFace> top{{2, 1}};
  CHECK(sum(face_weights(d3->grid(), d3->box(), top)) == doctest::Approx(4.0).epsilon(1e-13));
}

}  // TEST_SUITE
