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


#include "fcrkpm_tools/checks.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include <fcrkpm/discretization.hpp>
#include <fcrkpm/solvers.hpp>

namespace fcrkpm::tools {

namespace {

CheckResult upper_bound(std::string name, double measured, double tolerance,
                        std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tolerance;
  r.passed = std::isfinite(measured) && measured <= tolerance;
  r.detail = std::move(detail);
  return r;
}

DiscretizationOptions options_for(const CaseSpec& c, FftProvider& fft) {
  DiscretizationOptions o;
  o.dim = c.dim;
  o.degree = c.degree;
  o.a_tilde = {c.a_tilde, c.a_tilde, c.a_tilde};
  const double n = c.count;
  o.request = {n, n, n};
  o.fft = &fft;
  return o;
}

RealField random_domain_field(const Discretization& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return d.sample_domain([&](const Point&) { return u(rng); });
}

std::vector<double> doubles(const RealField& f) { return {f.begin(), f.end()}; }

}  // namespace

std::string CaseSpec::label() const {
  std::ostringstream os;
  os << dim << "d/N" << count << "/a" << a_tilde << "/n" << degree;
  return os.str();
}

std::vector<CaseSpec> standard_cases() {
  return {{1, 64, 1.5, 1}, {2, 32, 1.5, 1}, {3, 16, 1.5, 1}, {3, 16, 2.5, 2}};
}

double relative_max_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    ref = std::max(ref, std::abs(b[i]));
  }
  return ref > 0.0 ? diff / ref : diff;
}

CheckResult check_convolution_oracle(std::uint64_t seed, int pairs, FftProvider& fft) {
  const std::vector<Shape> shapes{
      {1, {8, 1, 1}},  {1, {12, 1, 1}}, {1, {30, 1, 1}}, {2, {8, 8, 1}},
      {2, {12, 10, 1}}, {2, {16, 16, 1}}, {3, {8, 8, 8}}, {3, {6, 10, 7}},
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  std::string worst_shape;
  for (int k = 0; k < pairs; ++k) {
    const Shape& s = shapes[static_cast<std::size_t>(k) % shapes.size()];
    RealField a(s);
    RealField b(s);
    for (double& v : a) v = u(rng);
    for (double& v : b) v = u(rng);
    const RealField fast = circular_convolve(a, b, fft);
    const RealField direct = direct_circular_convolve(a, b);
    const double e = relative_max_error(doubles(fast), doubles(direct));
    if (e > worst) {
      worst = e;
      worst_shape = s.describe();
    }
  }
  return upper_bound("convolution_oracle", worst, 1e-12,
                     std::to_string(pairs) + " pairs, worst on " + worst_shape);
}

std::vector<CheckResult> check_cross_method(const CaseSpec& c, std::uint64_t seed, FftProvider& fft,
                                            Fault fault) {
  const Discretization d(options_for(c, fft));
  const auto ref = d.make_reference();
  const NodeSet& nodes = ref->nodes();
  const std::string prefix = "cross_method/" + c.label() + "/";
  constexpr double tol = 1e-10;

  // The convolution path under test; a private copy when a fault is injected.
  std::unique_ptr<BasisTable> table;
  std::unique_ptr<MomentPrecomp> precomp;
  std::unique_ptr<FcOperators> faulty;
  const BasisTable* tab = &d.table();
  const FcOperators* ops = &d.ops();
  if (fault == Fault::PerturbKernel) {
    table = std::make_unique<BasisTable>(d.table());
    table->weighted[0][1] *= 1.0 + 1e-3;
    table->weighted_hat[0] = forward_half(table->weighted[0], fft);
    precomp = std::make_unique<MomentPrecomp>(
        build_moment_precomp(d.grid(), d.masks().chi, d.volume(), *table, fft));
    faulty = std::make_unique<FcOperators>(*table, *precomp, fft);
    tab = table.get();
    ops = faulty.get();
  }

  std::vector<CheckResult> out;
  {
    const MomentFields m = assemble_moment_fields(d.masks().chi, *tab, fft);
    double worst = 0.0;
    for (int p = 0; p < m.s; ++p) {
      for (int q = p; q < m.s; ++q) {
        worst = std::max(worst, relative_max_error(gather(nodes, m.at(p, q)), ref->moment_field(p, q)));
      }
    }
    out.push_back(upper_bound(prefix + "moments", worst, tol));
  }

  std::mt19937_64 rng(seed);
  const RealField coeff = random_domain_field(d, rng);
  const RealField source = random_domain_field(d, rng);
  const RealField rate = random_domain_field(d, rng);
  const auto coeff_n = gather(nodes, coeff);

  out.push_back(upper_bound(prefix + "u_h",
                            relative_max_error(gather(nodes, ops->evaluate_field(coeff)),
                                               ref->evaluate_field(coeff_n)),
                            tol));
  out.push_back(upper_bound(prefix + "f_int",
                            relative_max_error(gather(nodes, ops->internal_force(coeff)),
                                               ref->internal_force(coeff_n)),
                            tol));
  {
    const auto fc = ops->implicit_gradient(coeff);
    const auto direct = ref->implicit_gradient(coeff_n);
    double worst = 0.0;
    for (int k = 0; k < c.dim; ++k) {
      worst = std::max(worst, relative_max_error(gather(nodes, fc[k]), direct[k]));
    }
    out.push_back(upper_bound(prefix + "implicit_gradient", worst, tol));
  }
  out.push_back(upper_bound(prefix + "f_r",
                            relative_max_error(gather(nodes, ops->external_force(source)),
                                               ref->external_force(gather(nodes, source))),
                            tol));
  {
    std::vector<BoxFace> faces;
    for (int k = 0; k < c.dim; ++k) {
      faces.push_back({k, 0});
      faces.push_back({k, 1});
    }
    const RealField area = face_weights(d.grid(), d.box(), faces);
    RealField q = random_domain_field(d, rng);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (area[i] == 0.0) q[i] = 0.0;
    }
    out.push_back(upper_bound(prefix + "f_q",
                              relative_max_error(gather(nodes, ops->boundary_force(q, area)),
                                                 ref->boundary_force(gather(nodes, q), gather(nodes, area))),
                              tol));
  }
  out.push_back(upper_bound(prefix + "mass_force",
                            relative_max_error(gather(nodes, ops->mass_force(rate)),
                                               ref->mass_force(gather(nodes, rate))),
                            tol));
  out.push_back(upper_bound(prefix + "lumped_mass",
                            relative_max_error(gather(nodes, ops->lumped_mass()), ref->lumped_mass()),
                            tol));
  return out;
}

std::vector<CheckResult> check_reproducing(const CaseSpec& c, FftProvider& fft) {
  const Discretization d(options_for(c, fft));
  const FcOperators& ops = d.ops();
  const RealField& chi = d.masks().chi;
  const std::string prefix = "reproducing/" + c.label() + "/";
  std::vector<CheckResult> out;

  {
    const RealField u = ops.evaluate_field(d.sample_domain([](const Point&) { return 1.0; }));
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (chi[i] != 0.0) worst = std::max(worst, std::abs(u[i] - 1.0));
    }
    out.push_back(upper_bound(prefix + "partition_of_unity", worst, 1e-10));
  }
  {
    double worst = 0.0;
    for (int k = 0; k < c.dim; ++k) {
      const RealField x = d.sample_domain([k](const Point& p) { return p[k]; });
      const RealField u = ops.evaluate_field(x);
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (chi[i] != 0.0) worst = std::max(worst, std::abs(u[i] - x[i]));
      }
    }
    out.push_back(upper_bound(prefix + "linear_reproduction", worst, 1e-9));
  }
  {
    const std::array<double, 3> slope{0.7, -1.3, 0.4};
    const RealField lin = d.sample_domain([&](const Point& p) {
      return 0.25 + slope[0] * p[0] + slope[1] * p[1] + slope[2] * p[2];
    });
    const auto grad = ops.implicit_gradient(lin);
    double worst = 0.0;
    for (int k = 0; k < c.dim; ++k) {
      for (std::size_t i = 0; i < chi.size(); ++i) {
        if (chi[i] != 0.0) worst = std::max(worst, std::abs(grad[k][i] - slope[k]) / std::abs(slope[k]));
      }
    }
    out.push_back(upper_bound(prefix + "implicit_gradient_linear", worst, 1e-8));
  }
  return out;
}

std::vector<CheckResult> check_operator_structure(const CaseSpec& c, std::uint64_t seed, int pairs,
                                                  FftProvider& fft) {
  const Discretization d(options_for(c, fft));
  const FcOperators& ops = d.ops();
  const std::string prefix = "structure/" + c.label() + "/";
  std::mt19937_64 rng(seed);

  std::vector<RealField> d1;
  std::vector<RealField> d2;
  std::vector<RealField> f1;
  std::vector<RealField> f2;
  double scale = 0.0;
  for (int k = 0; k < pairs; ++k) {
    d1.push_back(random_domain_field(d, rng));
    d2.push_back(random_domain_field(d, rng));
    f1.push_back(ops.internal_force(d1.back()));
    f2.push_back(ops.internal_force(d2.back()));
    scale = std::max({scale, norm2(f1.back()) / norm2(d1.back()), norm2(f2.back()) / norm2(d2.back())});
  }

  double asym = 0.0;
  double negativity = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const double n1 = norm2(d1[k]);
    const double n2 = norm2(d2[k]);
    asym = std::max(asym, std::abs(dot(d1[k], f2[k]) - dot(d2[k], f1[k])) / (n1 * n2 * scale));
    negativity = std::max(negativity, -dot(d1[k], f1[k]) / (n1 * n1 * scale));
    negativity = std::max(negativity, -dot(d2[k], f2[k]) / (n2 * n2 * scale));
  }
  std::vector<CheckResult> out;
  out.push_back(upper_bound(prefix + "symmetry", asym, 1e-10, std::to_string(pairs) + " random pairs"));
  out.push_back(upper_bound(prefix + "semidefinite", std::max(negativity, 0.0), 1e-10));

  const RealField constant = d.sample_domain([](const Point&) { return 2.5; });
  const RealField fc = ops.internal_force(constant);
  out.push_back(upper_bound(prefix + "constant_nullspace", norm2(fc) / (scale * norm2(constant)), 1e-9));
  return out;
}

std::vector<CheckResult> check_transform_counts(const CaseSpec& c, FftProvider& fft) {
  CountingFftProvider counter(fft);
  DiscretizationOptions o = options_for(c, fft);
  o.fft = &counter;
  const Discretization d(o);
  const FcOperators& ops = d.ops();
  const std::size_t s = static_cast<std::size_t>(ops.basis_size());
  const RealField f = d.sample_domain([](const Point& p) { return 1.0 + p[0] - 0.5 * p[1] * p[2]; });
  const std::string prefix = "transform_count/" + c.label() + "/";

  std::vector<CheckResult> out;
  auto audit = [&](const std::string& name, std::size_t expected, auto&& call) {
    counter.reset();
    call();
    const double got = static_cast<double>(counter.total());
    CheckResult r;
    r.name = prefix + name;
    r.measured = got;
    r.tolerance = static_cast<double>(expected);
    r.passed = counter.total() == expected;
    r.detail = "expected exactly " + std::to_string(expected);
    out.push_back(r);
  };
  audit("internal_force", 2 * (s + 1), [&] { (void)ops.internal_force(f); });
  audit("mass_force", 2 * (s + 1), [&] { (void)ops.mass_force(f); });
  audit("external_force", s + 1, [&] { (void)ops.external_force(f); });
  audit("evaluate_field", s + 1, [&] { (void)ops.evaluate_field(f); });
  audit("boundary_force", s + 1, [&] { (void)ops.boundary_force(f, d.masks().gamma_g); });
  return out;
}

std::vector<CheckResult> check_lumped_mass(const CaseSpec& c, FftProvider& fft) {
  const Discretization d(options_for(c, fft));
  const RealField ml = d.ops().lumped_mass();
  RealField weighted = d.volume();
  for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] *= d.masks().chi[i];
  const double total = sum(ml);
  const double expected = sum(weighted);
  const std::string prefix = "lumped_mass/" + c.label() + "/";

  const auto ref = d.make_reference();
  const auto rows = ref->mass().row_sums();
  return {
      upper_bound(prefix + "total", std::abs(total - expected) / std::abs(expected), 1e-12),
      upper_bound(prefix + "row_sums", relative_max_error(gather(ref->nodes(), ml), rows), 1e-10),
  };
}

std::vector<CheckResult> check_periodic_constant(int dim, int count, FftProvider& fft) {
  Point origin{0, 0, 0};
  Point period{1, 1, 1};
  const PeriodicGrid grid(dim, origin, period, {count, count, count});
  const RealField chi = grid.make_field(1.0);
  const RealField volume = quadrature_weights(grid, chi);
  const BasisIndex basis = enumerate_basis(1, dim);
  const std::vector<double> a_tilde(static_cast<std::size_t>(dim), 1.5);
  const KernelSpec kernel = make_kernel(grid, a_tilde);
  const BasisTable table = build_basis_table(grid, basis, kernel, fft);
  const MomentPrecomp precomp = build_moment_precomp(grid, chi, volume, table, fft);
  const FcOperators ops(table, precomp, fft);

  const RealField ones = grid.make_field(1.0);
  const RealField u = ops.evaluate_field(ones);
  double pu = 0.0;
  for (double v : u) pu = std::max(pu, std::abs(v - 1.0));
  const RealField f = ops.internal_force(ones);

  const std::string prefix = "periodic/" + std::to_string(dim) + "d/";
  RealField probe = grid.sample([](const Point& x) { return std::sin(6.283185307179586 * x[0]); });
  const double scale = norm2(ops.internal_force(probe)) / norm2(probe);
  return {
      upper_bound(prefix + "partition_of_unity", pu, 1e-10),
      upper_bound(prefix + "constant_nullspace", norm2(f) / (scale * norm2(ones)), 1e-9),
  };
}

CheckResult check_static_direct(FftProvider& fft) {
  CaseSpec c{1, 16, 1.5, 1};
  const Discretization d(options_for(c, fft));
  const auto ref = d.make_reference();
  const NodeSet& nodes = ref->nodes();
  const std::size_t n = nodes.size();

  const RealField r = d.sample_domain([](const Point& x) { return 2.0 + x[0]; });
  const RealField g = d.sample_domain([](const Point& x) { return x[0] < 0.0 ? 0.25 : -0.5; });
  RealField dirichlet = d.grid().make_field();
  for (std::size_t i = 0; i < g.size(); ++i) dirichlet[i] = d.masks().gamma_g[i] * g[i];

  SolverConfig config;
  config.tolerance = 1e-12;
  const StaticSolution sol = solve_static_linear(d.ops(), d.masks(), d.ops().external_force(r), dirichlet, config);

  // Dense reference system with the boundary rows replaced by identities.
  const SparseOperator k = ref->stiffness();
  const auto f = ref->external_force(gather(nodes, r));
  const auto fixed = gather(nodes, d.masks().gamma_g);
  const auto gd = gather(nodes, dirichlet);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (fixed[i] != 0.0) {
      a(ii, ii) = 1.0;
      b(ii) = gd[i];
      continue;
    }
    b(ii) = f[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double kij = k.at(i, j);
      if (fixed[j] != 0.0) {
        b(ii) -= kij * gd[j];
      } else {
        a(ii, static_cast<Eigen::Index>(j)) = kij;
      }
    }
  }
  const Eigen::VectorXd x = a.partialPivLu().solve(b);
  const std::vector<double> direct(x.data(), x.data() + x.size());
  return upper_bound("static_cg_vs_direct", relative_max_error(gather(nodes, sol.d), direct), 1e-10,
                     std::to_string(sol.report.iterations) + " CG iterations");
}

}  // namespace fcrkpm::tools
