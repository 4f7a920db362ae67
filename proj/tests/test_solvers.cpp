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

#include <fcrkpm/solvers.hpp>

#include "fcrkpm_tools/experiments.hpp"
#include "support.hpp"

using namespace fcrkpm;

namespace {

// Thomas algorithm for tridiagonal (-1, 2, -1) systems.
std::vector<double> thomas(std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> b(n, 2.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double w = -1.0 / b[i - 1];
    b[i] -= w * -1.0;
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] + x[i + 1]) / b[i];
  return x;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("masked CG solves a tridiagonal system and keeps boundary data") {
  const Shape s{1, {12, 1, 1}};
  RealField mask(s);
  for (int i = 1; i <= 9; ++i) mask[static_cast<std::size_t>(i)] = 1.0;
  // Laplacian stencil acting on the whole field; node 0 and 10 carry data.
  const LinearMap op = [&](const RealField& d) {
    RealField out(s);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) out[i] = 2.0 * d[i] - d[i - 1] - d[i + 1];
    return out;
  };
  RealField rhs(s);
  for (std::size_t i = 1; i <= 9; ++i) rhs[i] = std::sin(static_cast<double>(i));
  RealField d(s);
  d[0] = 0.5;
  d[10] = -1.0;
  d[11] = 42.0;
  SolverConfig cfg;
  const SolveReport r = masked_cg(op, rhs, mask, d, cfg);
  CHECK(r.converged);
  CHECK(r.history.size() == r.iterations);
  CHECK(r.residual <= 1e-12);

  std::vector<double> b(9);
  for (std::size_t i = 0; i < 9; ++i) b[i] = rhs[i + 1];
  b[0] += 0.5;
  b[8] += -1.0;
  const auto x = thomas(b);
  for (std::size_t i = 0; i < 9; ++i) CHECK(d[i + 1] == doctest::Approx(x[i]).epsilon(1e-11));
  CHECK(d[0] == 0.5);
  CHECK(d[10] == -1.0);
  CHECK(d[11] == 42.0);
}

TEST_CASE("zero residual needs no iterations; a tight cap reports non-convergence") {
  const auto disc = test::box(1, 32);
  const RealField zero = disc->grid().make_field();
  const StaticSolution s = solve_static_linear(disc->ops(), disc->masks(), zero, zero);
  CHECK(s.report.iterations == 0);
  CHECK(s.report.converged);

  SolverConfig cfg;
  cfg.max_iterations = 2;
  const RealField f = disc->ops().external_force(disc->sample_domain([](const Point&) { return 1.0; }));
  const StaticSolution capped = solve_static_linear(disc->ops(), disc->masks(), f, zero, cfg);
  CHECK_FALSE(capped.report.converged);
  CHECK(capped.report.iterations == 2);
}

TEST_CASE("diffusivity scales the static solution") {
  const auto disc = test::box(2, 12);
  const RealField zero = disc->grid().make_field();
  const RealField f = disc->ops().external_force(disc->sample_domain([](const Point&) { return 1.0; }));
  SolverConfig one;
  SolverConfig four;
  four.diffusivity = 4.0;
  const StaticSolution a = solve_static_linear(disc->ops(), disc->masks(), f, zero, one);
  const StaticSolution b = solve_static_linear(disc->ops(), disc->masks(), f, zero, four);
  for (std::size_t i = 0; i < a.d.size(); ++i) CHECK(std::abs(b.d[i] - 0.25 * a.d[i]) < 1e-12);
}

TEST_CASE("nonlinear CG descends the energy and matches the linear solve without nonlinearity") {
  const auto disc = test::box(1, 32);
  const RealField zero = disc->grid().make_field();
  const RealField f = disc->ops().external_force(disc->sample_domain([](const Point& x) { return 2.0 + x[0]; }));
  const ScalarNonlinearity none{[](double) { return 0.0; }, [](double) { return 0.0; }};
  const StaticSolution lin = solve_static_linear(disc->ops(), disc->masks(), f, zero);
  const StaticSolution nl = solve_static_nonlinear(disc->ops(), disc->masks(), f, zero, none);
  CHECK(nl.report.converged);
  for (std::size_t i = 0; i < lin.d.size(); ++i) CHECK(std::abs(lin.d[i] - nl.d[i]) < 1e-10);

  const ScalarNonlinearity cubic{[](double u) { return u * u * u; }, [](double u) { return 3.0 * u * u; }};
  const StaticSolution c = solve_static_nonlinear(disc->ops(), disc->masks(), f, zero, cubic);
  CHECK(c.report.converged);
  for (double de : c.report.energy_steps) CHECK(de <= 0.0);
}

TEST_CASE("default explicit step") {
  const auto disc = test::box(2, 16);
  const double h = disc->grid().min_spacing();
  CHECK(default_explicit_dt(disc->grid(), 2.0) == doctest::Approx(0.2 * h * h / (2.0 * 2.0 * 2.0)));
}

TEST_CASE("explicit Euler is stable just below 2 / lambda and unstable just above") {
  const auto disc = test::box(1, 24);
  const RealField zero = disc->grid().make_field();
  const double lambda = estimate_max_eigenvalue(disc->ops(), disc->masks());
  CHECK(lambda > 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealField init = disc->grid().make_field();
  for (std::size_t i = 0; i < init.size(); ++i) init[i] = disc->masks().omega[i] * u(rng);

  auto final_norm = [&](double factor) {
    SolverConfig cfg;
    DiffusionStepper s(disc->ops(), disc->masks(), zero, zero, init, cfg, factor * 2.0 / lambda);
    for (int k = 0; k < 400; ++k) s.step();
    return norm2(s.coefficients());
  };
  CHECK(final_norm(0.9) < norm2(init));
  CHECK(final_norm(1.1) > 10.0 * norm2(init));
}

TEST_CASE("runaway explicit steps abort with the step index") {
  const auto disc = test::box(1, 24);
  const RealField zero = disc->grid().make_field();
  RealField init = disc->sample_domain([](const Point& x) { return 1.0 - x[0] * x[0]; });
  SolverConfig cfg;
  DiffusionStepper s(disc->ops(), disc->masks(), zero, zero, init, cfg, 1.0);
  CHECK_THROWS_AS([&] { for (int k = 0; k < 5000; ++k) s.step(); }(), NonFiniteState);
}

TEST_CASE("implicit Euler steps are unconditionally stable") {
  const auto disc = test::box(2, 12);
  const RealField zero = disc->grid().make_field();
  const RealField f = disc->ops().external_force(disc->sample_domain([](const Point&) { return 1.0; }));
  const StaticSolution st = solve_static_linear(disc->ops(), disc->masks(), f, zero);
  SolverConfig cfg;
  cfg.scheme = TimeScheme::ImplicitEuler;
  DiffusionStepper s(disc->ops(), disc->masks(), f, zero, zero, cfg, 50.0);
  for (int k = 0; k < 3; ++k) s.step();
  CHECK(s.last_report().converged);
  const RealField u = s.field();
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - st.u[i]));
  CHECK(err < 1e-6 * max_abs(st.u));
}

TEST_CASE("doubling the diffusivity halves the time to steady state") {
  using namespace fcrkpm::tools;
  auto time_to_steady = [](double nu) {
    RunConfig c = default_config("diffuse");
    c.n = {12};
    c.solver.diffusivity = nu;
    c.solver.t_end = 4.0;
    c.solver.sample_stride = 1;
    const DiffuseResult r = run_diffusion(c, fcrkpm::default_fft_provider());
    for (const DiffuseSample& s : r.samples) {
      if (s.diff_static_linf <= 1e-3 * r.static_linf) return s.t;
    }
    return r.samples.back().t;
  };
  const double ratio = time_to_steady(1.0) / time_to_steady(2.0);
  CHECK(ratio >= 1.7);
  CHECK(ratio <= 2.3);
}

}  // TEST_SUITE
