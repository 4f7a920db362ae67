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


#include "fcrkpm_tools/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include <fcrkpm/discretization.hpp>
#include <fcrkpm/manufactured.hpp>
#include <fcrkpm/solvers.hpp>

namespace fcrkpm::tools {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Shortest round-trip representation, so numeric payloads are reproducible.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Timing columns are exempt from reproducibility; six digits suffice.
std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

DiscretizationOptions fix_count_options(const RunConfig& c, const std::array<double, 3>& counts,
                                        FftProvider& fft) {
  DiscretizationOptions o;
  o.dim = c.dim;
  o.degree = c.degree;
  for (int k = 0; k < 3; ++k) o.a_tilde[k] = c.a_tilde_at(std::min(k, c.dim - 1));
  o.request = counts;
  o.fft = &fft;
  return o;
}

std::array<double, 3> per_axis(const std::vector<double>& v, int dim) {
  std::array<double, 3> out{1, 1, 1};
  for (int k = 0; k < dim; ++k) out[k] = v.size() == 1 ? v[0] : v[static_cast<std::size_t>(k)];
  for (int k = dim; k < 3; ++k) out[k] = out[0];
  return out;
}

double masked_linf(const RealField& a, const RealField& chi) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (chi[i] != 0.0) m = std::max(m, std::abs(a[i]));
  }
  return m;
}

/// Nodes with |offset_k| < a_tilde_k spacings on every axis.
std::size_t kernel_neighbors(int dim, double a_tilde) {
  const auto per_axis_count = static_cast<std::size_t>(2 * static_cast<int>(std::ceil(a_tilde)) - 1);
  std::size_t m = 1;
  for (int k = 0; k < dim; ++k) m *= per_axis_count;
  return m;
}

}  // namespace

RunConfig default_config(const std::string& experiment) {
  RunConfig c;
  c.experiment = experiment;
  if (experiment == "converge") {
    c.dim = 1;
  } else if (experiment == "bench") {
    c.dim = 3;
  } else if (experiment == "diffuse") {
    c.dim = 2;
    c.n = {16};
  }
  return c;
}

// ---- verify ---------------------------------------------------------------

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed; });
}

VerifyReport run_verify(const RunConfig& config, FftProvider& fft) {
  const Fault fault = config.verify.fault == "perturb-kernel" ? Fault::PerturbKernel : Fault::None;
  VerifyReport report;
  auto add = [&](std::vector<CheckResult> more) {
    for (auto& r : more) report.checks.push_back(std::move(r));
  };
  report.checks.push_back(check_convolution_oracle(config.seed, 200, fft));
  for (const CaseSpec& c : standard_cases()) {
    add(check_cross_method(c, config.seed, fft, fault));
    add(check_reproducing(c, fft));
    add(check_operator_structure(c, config.seed, 50, fft));
    add(check_transform_counts(c, fft));
    add(check_lumped_mass(c, fft));
  }
  add(check_periodic_constant(1, 32, fft));
  add(check_periodic_constant(2, 16, fft));
  add(check_periodic_constant(3, 8, fft));
  report.checks.push_back(check_static_direct(fft));
  return report;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  std::size_t failed = 0;
  for (const CheckResult& r : report.checks) {
    if (!r.passed) ++failed;
    checks.push_back({{"name", r.name},
                      {"passed", r.passed},
                      {"measured", r.measured},
                      {"tolerance", r.tolerance},
                      {"detail", r.detail}});
  }
  return {{"passed", report.passed()},
          {"total", report.checks.size()},
          {"failed", failed},
          {"checks", checks}};
}

// ---- converge -------------------------------------------------------------

std::vector<int> default_sweep(int dim) {
  const int top = dim == 1 ? 9 : dim == 2 ? 7 : 5;
  std::vector<int> sweep;
  for (int p = 3; p <= top; ++p) sweep.push_back(1 << p);
  return sweep;
}

ConvergeResult run_convergence(const RunConfig& config, FftProvider& fft) {
  const bool nonlinear = config.converge.problem == "cubic-reaction";
  const ManufacturedCase mc = nonlinear ? cubic_reaction_case() : poisson_case(config.dim);
  const std::vector<int> sweep =
      config.converge.sweep.empty() ? default_sweep(config.dim) : config.converge.sweep;
  const ScalarNonlinearity cubic{[](double u) { return u * u * u; },
                                 [](double u) { return 3.0 * u * u; }};

  SolverConfig solver;
  solver.tolerance = config.solver.tolerance;
  solver.max_iterations = config.solver.max_iterations;

  ConvergeResult result;
  std::vector<std::pair<double, double>> l2_points;
  std::vector<std::pair<double, double>> linf_points;
  for (int n : sweep) {
    const auto start = Clock::now();
    const double nd = n;
    const Discretization d(fix_count_options(config, {nd, nd, nd}, fft));
    const RealField rhs = d.ops().external_force(d.sample_domain(mc.source));
    RealField dirichlet = d.grid().make_field();
    for (std::size_t i = 0; i < dirichlet.size(); ++i) {
      if (d.masks().gamma_g[i] != 0.0) dirichlet[i] = mc.dirichlet(d.grid().coordinate(i));
    }
    const StaticSolution sol =
        nonlinear ? solve_static_nonlinear(d.ops(), d.masks(), rhs, dirichlet, cubic, solver)
                  : solve_static_linear(d.ops(), d.masks(), rhs, dirichlet, solver);
    const ErrorReport e = nodal_errors(sol.u, d.sample_domain(mc.exact), d.masks().chi);

    ConvergeRow row;
    row.dim = config.dim;
    row.degree = config.degree;
    row.a_tilde = config.a_tilde_at(0);
    for (int k = 0; k < config.dim; ++k) row.count[k] = d.grid().count(k);
    row.n_omega = d.domain_nodes();
    row.spacing = d.grid().spacing(0);
    row.e_l2 = e.l2;
    row.e_linf = e.linf;
    if (config.dim == 1) {
      const auto ref = d.make_reference();
      row.e_l2 = continuous_l2_error_1d(*ref, gather(ref->nodes(), sol.d),
                                        [&](double x) { return mc.exact({x, 0, 0}); });
    }
    row.iterations = sol.report.iterations;
    row.converged = sol.report.converged;
    row.wall_seconds = seconds_since(start);
    if (!row.converged) {
      std::cerr << "warning: solve at N=" << n << " did not reach tolerance (relative residual "
                << sol.report.residual << ")\n";
    }
    l2_points.emplace_back(row.spacing, row.e_l2);
    linf_points.emplace_back(row.spacing, row.e_linf);
    result.rows.push_back(row);
  }
  result.slope_l2 = convergence_slope(l2_points);
  result.slope_linf = convergence_slope(linf_points);
  return result;
}

void write_convergence_csv(std::ostream& os, const ConvergeResult& result) {
  os << kConvergeHeader << '\n';
  for (const ConvergeRow& r : result.rows) {
    os << r.dim << ',' << r.degree << ',' << num(r.a_tilde) << ',' << r.count[0] << ',' << r.count[1]
       << ',' << r.count[2] << ',' << r.n_omega << ',' << num(r.e_l2) << ',' << num(r.e_linf) << ','
       << r.iterations << ',' << fixed6(r.wall_seconds) << '\n';
  }
  const ConvergeRow first = result.rows.empty() ? ConvergeRow{} : result.rows.front();
  os << first.dim << ',' << first.degree << ',' << num(first.a_tilde) << ",slope,,,,"
     << num(result.slope_l2) << ',' << num(result.slope_linf) << ",,\n";
}

// ---- bench ----------------------------------------------------------------

Timing time_median(const std::function<void()>& call, int reps) {
  constexpr double kMinSample = 1e-4;
  auto start = Clock::now();
  call();
  const double warm = seconds_since(start);
  std::size_t batch = 1;
  if (warm < kMinSample) batch = static_cast<std::size_t>(std::ceil(kMinSample / std::max(warm, 1e-9)));

  std::vector<double> samples;
  for (int r = 0; r < reps; ++r) {
    start = Clock::now();
    for (std::size_t b = 0; b < batch; ++b) call();
    samples.push_back(seconds_since(start) / static_cast<double>(batch));
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  const double median =
      samples.size() % 2 == 1 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
  return {median, static_cast<std::size_t>(reps) * batch};
}

std::vector<TimingRecord> run_bench(const RunConfig& config, FftProvider& fft) {
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<TimingRecord> out;
  // Last measured traditional cell per (degree, a_tilde), used to
  // extrapolate cells above the size guard.
  std::map<std::pair<int, double>, std::vector<TimingRecord>> measured;

  for (int size : config.bench.sizes) {
    for (int degree : config.bench.degrees) {
      for (double a : config.bench.a_tilde) {
        DiscretizationOptions o;
        o.dim = config.dim;
        o.degree = degree;
        o.a_tilde = {a, a, a};
        o.mode = ExtensionMode::FixSpacing;
        const double h = 2.0 / (size - 1);
        o.request = {h, h, h};
        o.fft = &fft;
        const Discretization d(o);
        const RealField coeff = d.sample_domain([&](const Point&) { return uniform(rng); });
        const FcOperators& ops = d.ops();

        const std::size_t n_omega = d.domain_nodes();
        const std::size_t m = kernel_neighbors(config.dim, a);
        auto record = [&](std::string term, std::string method, const Timing& t, std::size_t bytes,
                          std::string note) {
          TimingRecord r;
          r.term = std::move(term);
          r.method = std::move(method);
          r.degree = degree;
          r.a_tilde = a;
          r.n_omega = n_omega;
          r.n_total = d.grid().size();
          r.neighbors = m;
          r.median_seconds = t.median_seconds;
          r.reps = t.reps;
          r.persistent_bytes = bytes;
          r.note = std::move(note);
          return r;
        };

        const std::size_t fc_bytes = ops.persistent_bytes();
        const std::string provider = "provider=" + fft.name();
        std::vector<TimingRecord> fc;
        fc.push_back(record("f_int", "fc", time_median([&] { (void)ops.internal_force(coeff); }, config.repetitions), fc_bytes, provider));
        fc.push_back(record("f_r", "fc", time_median([&] { (void)ops.external_force(coeff); }, config.repetitions), fc_bytes, provider));
        fc.push_back(record("u_h", "fc", time_median([&] { (void)ops.evaluate_field(coeff); }, config.repetitions), fc_bytes, provider));
        fc.push_back(record("moment", "fc",
                            time_median([&] {
                              (void)build_moment_precomp(d.grid(), d.masks().chi, d.volume(), d.table(), fft);
                            }, config.repetitions),
                            fc_bytes, provider + "; assembly and inversion"));

        std::vector<TimingRecord> trad;
        const auto key = std::make_pair(degree, a);
        if (n_omega <= config.bench.traditional_limit) {
          const auto ref = d.make_reference();
          const NodeSet& nodes = ref->nodes();
          const auto coeff_n = gather(nodes, coeff);
          const SparseOperator k = ref->stiffness();
          const std::size_t bytes = ref->persistent_bytes(k);
          const Timing assembly = time_median(
              [&] { (void)assemble_stiffness(nodes, ref->neighbors(), ref->basis(), ref->kernel()); },
              config.repetitions);
          const Timing product = time_median([&] { (void)k.multiply(coeff_n); }, config.repetitions);
          TimingRecord fint = record("f_int", "traditional",
                                     {assembly.median_seconds + product.median_seconds, assembly.reps},
                                     bytes, "K assembly + K d");
          trad.push_back(fint);
          trad.push_back(record("f_r", "traditional",
                                time_median([&] { (void)ref->external_force(coeff_n); }, config.repetitions),
                                bytes, "cached shape functions"));
          trad.push_back(record("u_h", "traditional",
                                time_median([&] { (void)ref->evaluate_field(coeff_n); }, config.repetitions),
                                bytes, "cached shape functions"));
          const NeighborTable& nb = ref->neighbors();
          trad.push_back(record("moment", "traditional",
                                time_median([&] {
                                  for (std::size_t i = 0; i < nodes.size(); ++i) {
                                    (void)shape_functions_at(nodes.x[i], nb.row(i), nodes, ref->basis(),
                                                             ref->kernel(), false);
                                  }
                                }, config.repetitions),
                                bytes, "per-node moment matrix and inversion"));
          trad.push_back(record("K_assembly", "traditional", assembly, bytes,
                                "includes shape functions; excludes neighbor search"));
          trad.push_back(record("Kd_product", "traditional", product, bytes, ""));
          for (auto& r : trad) r.neighbors = nb.max_count();
          measured[key] = trad;
        } else if (auto it = measured.find(key); it != measured.end()) {
          for (const TimingRecord& base : it->second) {
            TimingRecord r = base;
            const double scale = static_cast<double>(n_omega) / static_cast<double>(base.n_omega);
            r.n_omega = n_omega;
            r.n_total = d.grid().size();
            r.median_seconds = *base.median_seconds * scale;
            r.reps = 0;
            r.persistent_bytes = static_cast<std::size_t>(static_cast<double>(base.persistent_bytes) * scale);
            r.note = "estimated: above N_omega limit " + std::to_string(config.bench.traditional_limit) +
                     ", scaled linearly from N_omega=" + std::to_string(base.n_omega);
            trad.push_back(r);
          }
        } else {
          for (const char* term : {"f_int", "f_r", "u_h", "moment", "K_assembly", "Kd_product"}) {
            TimingRecord r = record(term, "traditional", {}, 0, "skipped: above N_omega limit " +
                                    std::to_string(config.bench.traditional_limit) + ", no smaller cell to scale from");
            r.median_seconds.reset();
            r.reps = 0;
            trad.push_back(r);
          }
        }

        for (TimingRecord& f : fc) {
          for (const TimingRecord& t : trad) {
            if (t.term == f.term && t.median_seconds && *f.median_seconds > 0.0) {
              f.speedup = *t.median_seconds / *f.median_seconds;
            }
          }
          out.push_back(f);
        }
        for (TimingRecord& t : trad) out.push_back(t);
      }
    }
  }
  return out;
}

void write_bench_csv(std::ostream& os, const std::vector<TimingRecord>& records) {
  os << kBenchHeader << '\n';
  for (const TimingRecord& r : records) {
    os << r.term << ',' << r.method << ',' << r.degree << ',' << num(r.a_tilde) << ',' << r.n_omega << ','
       << r.n_total << ',' << r.neighbors << ',' << (r.median_seconds ? short_num(*r.median_seconds) : "")
       << ',' << r.reps << ',' << r.persistent_bytes << ',' << (r.speedup ? short_num(*r.speedup) : "") << ','
       << r.note << '\n';
  }
}

// ---- diffuse --------------------------------------------------------------

DiffuseResult run_diffusion(const RunConfig& config, FftProvider& fft) {
  const Discretization d(fix_count_options(config, per_axis(config.n, config.dim), fft));
  const ManufacturedCase mc = poisson_case(config.dim);
  const RealField rhs = d.ops().external_force(d.sample_domain(mc.source));
  const RealField zero = d.grid().make_field();
  const RealField& chi = d.masks().chi;

  SolverConfig solver;
  solver.tolerance = config.solver.tolerance;
  solver.max_iterations = config.solver.max_iterations;
  solver.diffusivity = config.solver.diffusivity;
  solver.scheme = config.solver.scheme == "implicit-euler" ? TimeScheme::ImplicitEuler
                                                           : TimeScheme::ExplicitEuler;
  const StaticSolution steady = solve_static_linear(d.ops(), d.masks(), rhs, zero, solver);

  double dt = config.solver.dt;
  if (dt == 0.0) {
    const double explicit_dt = default_explicit_dt(d.grid(), solver.diffusivity);
    if (solver.scheme == TimeScheme::ExplicitEuler) {
      dt = explicit_dt;
    } else {
      const double lambda = estimate_max_eigenvalue(d.ops(), d.masks());
      dt = 100.0 * 2.0 / (solver.diffusivity * lambda);
    }
  }

  DiffuseResult result;
  result.dt = dt;
  result.static_linf = masked_linf(steady.u, chi);
  result.steps = static_cast<std::size_t>(std::ceil(config.solver.t_end / dt - 1e-9));
  const std::size_t stride = config.solver.sample_stride > 0
                                 ? config.solver.sample_stride
                                 : std::max<std::size_t>(1, result.steps / 50);

  DiffusionStepper stepper(d.ops(), d.masks(), rhs, zero, zero, solver, dt);
  auto sample = [&] {
    const RealField u = stepper.field();
    RealField diff = u;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= steady.u[i];
    result.samples.push_back({stepper.steps_taken(), stepper.time(), masked_linf(u, chi), masked_linf(diff, chi)});
  };
  sample();
  while (stepper.steps_taken() < result.steps) {
    stepper.step();
    if (stepper.steps_taken() % stride == 0 || stepper.steps_taken() == result.steps) sample();
  }
  return result;
}

void write_diffusion_csv(std::ostream& os, const DiffuseResult& result) {
  os << kDiffuseHeader << '\n';
  for (const DiffuseSample& s : result.samples) {
    os << s.step << ',' << num(s.t) << ',' << num(s.u_linf) << ',' << num(s.diff_static_linf) << '\n';
  }
}

}  // namespace fcrkpm::tools
