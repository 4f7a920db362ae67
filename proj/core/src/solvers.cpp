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


#include "fcrkpm/solvers.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace fcrkpm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t iteration_cap(const SolverConfig& config, const RealField& free_mask) {
  if (config.max_iterations > 0) return config.max_iterations;
  return std::max<std::size_t>(10, 10 * static_cast<std::size_t>(sum(free_mask)));
}

void mask_in_place(RealField& f, const RealField& mask) {
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= mask[i];
}

}  // namespace

SolveReport masked_cg(const LinearMap& op, const RealField& rhs, const RealField& free_mask,
                      RealField& d, const SolverConfig& config) {
  if (!(config.tolerance > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  require_same_shape(rhs.shape(), d.shape(), "masked_cg");
  require_same_shape(free_mask.shape(), d.shape(), "masked_cg");
  const auto t0 = Clock::now();
  SolveReport report;

  RealField r = rhs;
  axpy(-1.0, op(d), r);
  mask_in_place(r, free_mask);
  double rr = dot(r, r);
  const double r0 = std::sqrt(rr);
  if (r0 == 0.0) {
    report.converged = true;
    report.wall_seconds = seconds_since(t0);
    return report;
  }
  RealField p = r;
  const std::size_t cap = iteration_cap(config, free_mask);
  while (report.iterations < cap) {
    RealField ap = op(p);
    mask_in_place(ap, free_mask);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      report.warnings.push_back("operator is not positive definite along a search direction");
      break;
    }
    const double alpha = rr / pap;
    axpy(alpha, p, d);
    axpy(-alpha, ap, r);
    ++report.iterations;
    const double rr_new = dot(r, r);
    report.residual = std::sqrt(rr_new) / r0;
    report.history.push_back(report.residual);
    if (report.residual <= config.tolerance) {
      report.converged = true;
      break;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
  }
  if (!report.converged) {
    std::ostringstream os;
    os << "CG stopped after " << report.iterations << " iterations at relative residual "
       << report.residual;
    report.warnings.push_back(os.str());
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

RealField initial_coefficients(const MaskSet& masks, const RealField& dirichlet) {
  require_same_shape(masks.chi.shape(), dirichlet.shape(), "initial_coefficients");
  return hadamard(masks.gamma_g, dirichlet);
}

StaticSolution solve_static_linear(const FcOperators& ops, const MaskSet& masks,
                                   const RealField& rhs, const RealField& dirichlet,
                                   const SolverConfig& config) {
  StaticSolution out;
  out.d = initial_coefficients(masks, dirichlet);
  const double nu = config.diffusivity;
  const LinearMap k = [&](const RealField& x) {
    RealField f = ops.internal_force(x);
    if (nu != 1.0) {
      for (double& v : f) v *= nu;
    }
    return f;
  };
  out.report = masked_cg(k, rhs, masks.omega, out.d, config);
  out.u = ops.evaluate_field(out.d);
  return out;
}

StaticSolution solve_static_nonlinear(const FcOperators& ops, const MaskSet& masks,
                                      const RealField& rhs, const RealField& dirichlet,
                                      const ScalarNonlinearity& nonlinearity,
                                      const SolverConfig& config) {
  if (!nonlinearity.value || !nonlinearity.derivative) {
    throw InvalidArgument("solve_static_nonlinear: nonlinearity needs a value and a derivative");
  }
  const auto t0 = Clock::now();
  const RealField& free = masks.omega;
  const double nu = config.diffusivity;

  // Residual and the state needed for Jacobian products.
  struct Eval {
    RealField residual;
    RealField u;
  };
  const auto evaluate = [&](const RealField& d) {
    Eval e{ops.internal_force(d), ops.evaluate_field(d)};
    if (nu != 1.0) {
      for (double& v : e.residual) v *= nu;
    }
    RealField n(e.u.shape());
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = nonlinearity.value(e.u[i]);
    axpy(1.0, ops.nonlinear_force_scalar(n), e.residual);
    axpy(-1.0, rhs, e.residual);
    mask_in_place(e.residual, free);
    return e;
  };
  const auto jacobian_times = [&](const Eval& at, const RealField& p) {
    RealField jp = ops.internal_force(p);
    if (nu != 1.0) {
      for (double& v : jp) v *= nu;
    }
    RealField up = ops.evaluate_field(p);
    for (std::size_t i = 0; i < up.size(); ++i) up[i] *= nonlinearity.derivative(at.u[i]);
    axpy(1.0, ops.nonlinear_force_scalar(up), jp);
    mask_in_place(jp, free);
    return jp;
  };

  StaticSolution out;
  out.d = initial_coefficients(masks, dirichlet);
  SolveReport& report = out.report;
  Eval cur = evaluate(out.d);
  const double r0 = norm2(cur.residual);
  if (r0 == 0.0) {
    report.converged = true;
    out.u = cur.u;
    report.wall_seconds = seconds_since(t0);
    return out;
  }
  RealField p = cur.residual;
  for (double& v : p) v = -v;
  const std::size_t cap = iteration_cap(config, free);
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 40;
  const double gauss = 0.5 / std::sqrt(3.0);

  // Round-off floor detection: no new best residual for this many steps.
  constexpr std::size_t kStagnation = 200;
  double best = 1.0;
  std::size_t best_at = 0;

  const auto directional = [&](const RealField& d, double t, const RealField& dir) {
    RealField x = d;
    axpy(t, dir, x);
    return dot(dir, evaluate(x).residual);
  };

  while (report.iterations < cap) {
    double slope = dot(p, cur.residual);
    if (!(slope < 0.0)) {
      // Not a descent direction for the energy: restart along -R.
      p = cur.residual;
      for (double& v : p) v = -v;
      slope = -dot(cur.residual, cur.residual);
    }
    const double curvature = dot(p, jacobian_times(cur, p));
    double alpha = curvature > 0.0 ? -slope / curvature : 1.0;

    bool accepted = false;
    double energy_change = 0.0;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      energy_change = 0.5 * alpha *
                      (directional(out.d, alpha * (0.5 - gauss), p) +
                       directional(out.d, alpha * (0.5 + gauss), p));
      if (energy_change <= kArmijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      report.warnings.push_back("line search failed to decrease the energy");
      break;
    }
    axpy(alpha, p, out.d);
    Eval next = evaluate(out.d);
    ++report.iterations;
    report.energy_steps.push_back(energy_change);
    report.residual = norm2(next.residual) / r0;
    report.history.push_back(report.residual);
    const double rr_old = dot(cur.residual, cur.residual);
    double beta = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      beta += next.residual[i] * (next.residual[i] - cur.residual[i]);
    }
    beta = std::max(0.0, beta / rr_old);
    cur = std::move(next);
    if (report.residual <= config.tolerance) {
      report.converged = true;
      break;
    }
    if (report.residual < best) {
      best = report.residual;
      best_at = report.iterations;
    } else if (report.iterations - best_at >= kStagnation) {
      std::ostringstream os;
      os << "nonlinear CG stagnated at relative residual " << best << " (round-off floor)";
      report.warnings.push_back(os.str());
      break;
    }
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = -cur.residual[i] + beta * p[i];
  }
  if (!report.converged && report.warnings.empty()) {
    std::ostringstream os;
    os << "nonlinear CG stopped after " << report.iterations << " iterations at relative residual "
       << report.residual;
    report.warnings.push_back(os.str());
  }
  out.u = cur.u;
  report.wall_seconds = seconds_since(t0);
  return out;
}

double default_explicit_dt(const PeriodicGrid& grid, double diffusivity) {
  if (!(diffusivity > 0.0)) throw InvalidArgument("diffusivity must be positive");
  const double h = grid.min_spacing();
  return 0.2 * h * h / (2.0 * grid.dim() * diffusivity);
}

double estimate_max_eigenvalue(const FcOperators& ops, const MaskSet& masks,
                               std::size_t iterations) {
  const RealField ml = ops.lumped_mass();
  RealField x(ops.shape());
  // Deterministic start with energy in every mode, including the highest.
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = masks.omega[i] * (1.0 + 0.5 * std::sin(1.0 + 37.0 * static_cast<double>(i)));
  }
  double lambda = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const double nx = norm2(x);
    if (nx == 0.0) return 0.0;
    for (double& v : x) v /= nx;
    RealField y = ops.internal_force(x);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = masks.omega[i] != 0.0 ? y[i] / ml[i] : 0.0;
    }
    lambda = norm2(y);
    x = std::move(y);
  }
  return lambda;
}

DiffusionStepper::DiffusionStepper(const FcOperators& ops, const MaskSet& masks, RealField rhs,
                                   RealField dirichlet, RealField initial,
                                   const SolverConfig& config, double dt)
    : ops_(ops),
      masks_(masks),
      rhs_(std::move(rhs)),
      d_(std::move(initial)),
      config_(config),
      dt_(dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(config.diffusivity > 0.0)) throw InvalidArgument("diffusivity must be positive");
  require_same_shape(d_.shape(), ops.shape(), "DiffusionStepper");
  for (std::size_t i = 0; i < d_.size(); ++i) {
    d_[i] = masks.omega[i] * d_[i] + masks.gamma_g[i] * dirichlet[i];
  }
  if (config.scheme == TimeScheme::ExplicitEuler) {
    lumped_ = ops.lumped_mass();
    for (std::size_t i = 0; i < lumped_.size(); ++i) {
      if (masks.omega[i] != 0.0 && !(lumped_[i] > 0.0)) throw NonPositiveLumpedMass(i, lumped_[i]);
    }
  }
}

void DiffusionStepper::step() {
  const double nu = config_.diffusivity;
  if (config_.scheme == TimeScheme::ExplicitEuler) {
    const RealField k = ops_.internal_force(d_);
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (masks_.omega[i] == 0.0) continue;
      d_[i] += dt_ * (rhs_[i] - nu * k[i]) / lumped_[i];
    }
  } else {
    RealField b = ops_.mass_force(d_);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = b[i] / dt_ + rhs_[i];
    const double inv_dt = 1.0 / dt_;
    const LinearMap a = [&](const RealField& x) {
      RealField f = ops_.mass_force(x);
      const RealField k = ops_.internal_force(x);
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = f[i] * inv_dt + nu * k[i];
      return f;
    };
    report_ = masked_cg(a, b, masks_.omega, d_, config_);
  }
  ++steps_;
  for (double v : d_) {
    if (!std::isfinite(v)) throw NonFiniteState(steps_);
  }
}

}  // namespace fcrkpm
