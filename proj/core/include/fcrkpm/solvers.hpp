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


#ifndef FCRKPM_SOLVERS_HPP
#define FCRKPM_SOLVERS_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fcrkpm/field.hpp"
#include "fcrkpm/grid.hpp"
#include "fcrkpm/operators.hpp"

namespace fcrkpm {

enum class TimeScheme { ExplicitEuler, ImplicitEuler };

struct SolverConfig {
  double tolerance = 1e-12;
  /// 0 selects 10 times the number of free nodes.
  std::size_t max_iterations = 0;
  /// Diffusion coefficient nu in M ddot + nu K d = f.
  double diffusivity = 1.0;
  /// 0 selects the scheme default (explicit: 0.2 min(h)^2 / (2 d nu)).
  double dt = 0.0;
  std::size_t steps = 0;
  TimeScheme scheme = TimeScheme::ExplicitEuler;
};

struct SolveReport {
  std::size_t iterations = 0;
  double residual = 0.0;  ///< final ||r|| / ||r0||
  double wall_seconds = 0.0;
  bool converged = false;
  std::vector<std::string> warnings;
  /// Relative residual after each iteration.
  std::vector<double> history;
  /// Nonlinear solves only: energy change of each accepted step (all <= 0).
  std::vector<double> energy_steps;
};

/// Symmetric linear map on grid fields.
using LinearMap = std::function<RealField(const RealField&)>;

/// Conjugate gradients restricted to the nodes where free_mask = 1. The
/// entries of d outside that mask are read (they carry boundary data) but
/// never written.
SolveReport masked_cg(const LinearMap& op, const RealField& rhs, const RealField& free_mask,
                      RealField& d, const SolverConfig& config);

struct StaticSolution {
  RealField d;
  RealField u;
  SolveReport report;
};

/// d starts as g on the Dirichlet nodes and 0 elsewhere.
RealField initial_coefficients(const MaskSet& masks, const RealField& dirichlet);

/// Solves nu K d = rhs with d = g held on the Dirichlet nodes.
StaticSolution solve_static_linear(const FcOperators& ops, const MaskSet& masks,
                                   const RealField& rhs, const RealField& dirichlet,
                                   const SolverConfig& config = {});

/// Pointwise nonlinearity N(u) paired with the test functions, with its
/// derivative for Jacobian products.
struct ScalarNonlinearity {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// Polak-Ribiere nonlinear CG on R(d) = K d + f_N(d) - rhs. R is the
/// gradient of an energy E; each step starts from the Newton step of
/// p.R(d + alpha p) = 0 and backtracks (Armijo 1e-4, halving, at most 40
/// times) on the energy change, integrated along the step with two-point
/// Gauss quadrature of p.R.
StaticSolution solve_static_nonlinear(const FcOperators& ops, const MaskSet& masks,
                                      const RealField& rhs, const RealField& dirichlet,
                                      const ScalarNonlinearity& nonlinearity,
                                      const SolverConfig& config = {});

double default_explicit_dt(const PeriodicGrid& grid, double diffusivity);

/// Largest eigenvalue of M_l^-1 K on the free nodes by power iteration;
/// the explicit Euler limit is 2 / (nu lambda).
double estimate_max_eigenvalue(const FcOperators& ops, const MaskSet& masks,
                               std::size_t iterations = 200);

/// Time stepping of M ddot + nu K d = rhs.
class DiffusionStepper {
 public:
  DiffusionStepper(const FcOperators& ops, const MaskSet& masks, RealField rhs,
                   RealField dirichlet, RealField initial, const SolverConfig& config,
                   double dt);

  void step();
  const RealField& coefficients() const { return d_; }
  RealField field() const { return ops_.evaluate_field(d_); }
  double time() const { return static_cast<double>(steps_) * dt_; }
  std::size_t steps_taken() const { return steps_; }
  double dt() const { return dt_; }
  /// Report of the most recent implicit solve.
  const SolveReport& last_report() const { return report_; }

 private:
  const FcOperators& ops_;
  const MaskSet& masks_;
  RealField rhs_;
  RealField d_;
  SolverConfig config_;
  double dt_;
  std::size_t steps_ = 0;
  RealField lumped_;
  SolveReport report_;
};

}  // namespace fcrkpm

#endif  // FCRKPM_SOLVERS_HPP
