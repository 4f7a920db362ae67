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

#include <set>

#include <fcrkpm/moment.hpp>

#include "support.hpp"

using namespace fcrkpm;

namespace {

std::size_t node_at(const Discretization& d, double x) {
  for (std::size_t i = 0; i < d.grid().size(); ++i) {
    if (std::abs(d.grid().coordinate(i, 0) - x) < 1e-12) return i;
  }
  FAIL("no node at requested coordinate");
  return 0;
}

}  // namespace

TEST_SUITE("moment") {

TEST_CASE("upper-triangle slots are a bijection") {
  for (int s : {1, 2, 4, 10}) {
    std::set<std::size_t> seen;
    for (int p = 0; p < s; ++p) {
      for (int q = p; q < s; ++q) {
        CHECK(MomentFields::slot(p, q, s) == MomentFields::slot(q, p, s));
        seen.insert(MomentFields::slot(p, q, s));
      }
    }
    CHECK(seen.size() == static_cast<std::size_t>(s * (s + 1) / 2));
    CHECK(*seen.rbegin() == seen.size() - 1);
  }
}

TEST_CASE("interior 1D moments match the hand-summed kernel") {
  // a_tilde = 1.5: the neighbors at offsets 0 and +-h contribute, with
  // phi(0) = 2/3 and phi(h) = 4/3 (1 - 2/3)^3 = 4/81.
  const auto d = test::box(1, 16);
  const MomentFields m = assemble_moment_fields(d->masks().chi, d->table());
  const double h = d->grid().spacing(0);
  const std::size_t i = node_at(*d, 0.0);
  CHECK(m.at(0, 0)[i] == doctest::Approx(2.0 / 3.0 + 8.0 / 81.0).epsilon(1e-14));
  CHECK(std::abs(m.at(0, 1)[i]) < 1e-15);
  CHECK(m.at(1, 1)[i] == doctest::Approx(2.0 * h * h * 4.0 / 81.0).epsilon(1e-13));

  // At the left end only the node itself and its right neighbor remain.
  const std::size_t e = node_at(*d, -1.0);
  CHECK(m.at(0, 0)[e] == doctest::Approx(2.0 / 3.0 + 4.0 / 81.0).epsilon(1e-14));
}

TEST_CASE("padding nodes carry the identity") {
  const auto d = test::box(2, 16, 1.5, 1);
  const MomentFields m = assemble_moment_fields(d->masks().chi, d->table());
  const RealField& chi = d->masks().chi;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    if (chi[i] != 0.0) continue;
    CHECK(m.at(0, 0)[i] == 1.0);
    CHECK(m.at(1, 1)[i] == 1.0);
    CHECK(m.at(0, 2)[i] == 0.0);
  }
}

TEST_CASE("extracted rows invert the moment matrix") {
  const auto d = test::box(2, 12, 2.5, 2);
  const MomentFields m = assemble_moment_fields(d->masks().chi, d->table());
  const MomentPrecomp& pre = d->precomp();
  const int s = pre.s;
  const RealField& chi = d->masks().chi;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    if (chi[i] == 0.0) continue;
    for (int q = 0; q < s; ++q) {
      double row0 = 0.0;
      double rowx = 0.0;
      for (int p = 0; p < s; ++p) {
        row0 += pre.b0[p][i] * m.at(p, q)[i];
        rowx += pre.bgrad[0][p][i] * m.at(p, q)[i];
      }
      CHECK(row0 == doctest::Approx(q == 0 ? 1.0 : 0.0).epsilon(1e-10));
      // bgrad carries the selector's sign.
      CHECK(rowx == doctest::Approx(q == 1 ? -1.0 : 0.0).epsilon(1e-10));
    }
    CHECK(pre.c0[0][i] == doctest::Approx(pre.b0[0][i] * d->volume()[i]).epsilon(1e-15));
  }
}

TEST_CASE("persistent bytes count every stored field") {
  const auto d = test::box(1, 16);
  // chi, volume, b0 (2), c0 (2), chi_b0 (2), bgrad (2), cgrad (2)
  CHECK(d->precomp().persistent_bytes() == 12 * 16 * sizeof(double));
}

TEST_CASE("too small a support leaves the moment matrix singular") {
  CHECK_THROWS_AS(test::box(1, 16, 1.0), SingularMoment);
}

}  // TEST_SUITE
