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

#ifndef FCRKPM_BASIS_HPP
#define FCRKPM_BASIS_HPP

#include <array>
#include <vector>

#include "fcrkpm/field.hpp"
#include "fcrkpm/grid.hpp"
#include "fcrkpm/spectral.hpp"

namespace fcrkpm {

/// Complete monomial basis of total degree <= n in d variables.
///
/// Ordering is graded by total degree, then by x exponent descending, then
/// by y exponent descending: 1, x, y, z, x^2, xy, xz, y^2, yz, z^2, ...
struct BasisIndex {
  int degree = 1;
  int dim = 1;
  std::vector<std::array<int, 3>> exponents;

  int size() const { return static_cast<int>(exponents.size()); }
  /// Minimum number of non-degenerate neighbors for an invertible moment
  /// matrix; equals size().
  int min_neighbors() const { return size(); }

  double evaluate(int p, const Point& x) const;
  /// Fills h[p] = monomial_p(x) for all p.
  void evaluate_all(const Point& x, std::span<double> h) const;
  /// Position of the degree-1 monomial of an axis.
  int linear_position(int axis) const;
};

BasisIndex enumerate_basis(int degree, int dim);

/// Cubic B-spline profile in z = |x| / a:
///   2/3 - 4z^2 + 4z^3          for 0 <= z <= 1/2
///   4/3 (1 - z)^3              for 1/2 < z < 1
///   0                          for z >= 1
double eval_kernel_1d(double x, double a);

/// Tensor-product kernel with rectangular support.
struct KernelSpec {
  int dim = 1;
  std::array<double, 3> support{1, 1, 1};

  double operator()(const Point& x) const;
  /// Whether |x_k| < a_k on every axis.
  bool covers(const Point& x) const;
};

KernelSpec make_kernel(const PeriodicGrid& grid, std::span<const double> a_tilde);

/// Constant selector replacing H(0) in the shape-function formula: -1 at
/// the degree-1 monomial of `axis`. Requires degree >= 1.
std::vector<double> gradient_selector(int axis, const BasisIndex& basis);
/// H(0) = e_1.
std::vector<double> value_selector(const BasisIndex& basis);

/// Seam-adjusted basis arrays on the periodic box. For each node with
/// wrapped offset xi:
///   monomial[p](xi) = H_p(xi)
///   weighted[p](xi) = H_p(xi) phi(xi)
///   reflected[p](xi) = H_p(-xi) phi(-xi)
/// together with the half spectra (see half_shape) of the last two.
struct BasisTable {
  BasisIndex basis;
  KernelSpec kernel;
  std::vector<RealField> monomial;
  std::vector<RealField> weighted;
  std::vector<RealField> reflected;
  std::vector<SpectralField> weighted_hat;
  std::vector<SpectralField> reflected_hat;

  int size() const { return basis.size(); }
  std::size_t persistent_bytes() const;
};

/// Throws InvalidArgument when a kernel support reaches half a period.
BasisTable build_basis_table(const PeriodicGrid& grid, const BasisIndex& basis,
                             const KernelSpec& kernel, FftProvider& fft = default_fft_provider());

}  // namespace fcrkpm

#endif  // FCRKPM_BASIS_HPP
