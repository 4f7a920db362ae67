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


#ifndef FCRKPM_MANUFACTURED_HPP
#define FCRKPM_MANUFACTURED_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fcrkpm/field.hpp"
#include "fcrkpm/grid.hpp"
#include "fcrkpm/reference.hpp"

namespace fcrkpm {

/// Poisson-type problem on [-1, 1]^d with a closed-form solution.
struct ManufacturedCase {
  std::string name;
  int dim = 1;
  BoxDomain domain;
  std::function<double(const Point&)> exact;
  std::function<double(const Point&)> source;
  std::function<double(const Point&)> dirichlet;
};

/// -lap u = r with u = prod_k (1 - x_k^2).
ManufacturedCase poisson_case(int dim);
/// -u'' + u^3 = 2 + (1 - x^2)^3 with u = 1 - x^2.
ManufacturedCase cubic_reaction_case();

struct ErrorReport {
  double l2 = 0.0;    ///< normalized nodal L2
  double linf = 0.0;  ///< normalized nodal max
  std::optional<double> continuous_l2;
};

ErrorReport nodal_errors(const RealField& uh, const RealField& exact, const RealField& chi);

/// sqrt of the integral of (u_h - u)^2 over [lo, hi], 5 Gauss points per
/// cell between consecutive nodes. u_h is evaluated from the reference
/// shape functions and the coefficients d (one per reference node).
double continuous_l2_error_1d(const ReferenceRkpm& reference, std::span<const double> d,
                              const std::function<double(double)>& exact);

/// Least-squares slope of log(e) against log(h) over the `tail` smallest h.
double convergence_slope(std::vector<std::pair<double, double>> points, std::size_t tail = 3);

}  // namespace fcrkpm

#endif  // FCRKPM_MANUFACTURED_HPP
