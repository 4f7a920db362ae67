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

#include "fcrkpm/basis.hpp"

#include <cmath>
#include <sstream>

namespace fcrkpm {

BasisIndex enumerate_basis(int degree, int dim) {
  if (degree < 0) throw InvalidArgument("basis degree must be non-negative");
  if (dim < 1 || dim > 3) throw InvalidArgument("basis dimension must be 1, 2 or 3");
  BasisIndex b;
  b.degree = degree;
  b.dim = dim;
  for (int total = 0; total <= degree; ++total) {
    const int max_x = total;
    for (int ax = max_x; ax >= 0; --ax) {
      if (dim == 1) {
        if (ax == total) b.exponents.push_back({ax, 0, 0});
        continue;
      }
      for (int ay = total - ax; ay >= 0; --ay) {
        const int az = total - ax - ay;
        if (dim == 2 && az != 0) continue;
        b.exponents.push_back({ax, ay, az});
      }
    }
  }
  return b;
}

double BasisIndex::evaluate(int p, const Point& x) const {
  const auto& e = exponents[p];
  double v = 1.0;
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < e[k]; ++j) v *= x[k];
  }
  return v;
}

void BasisIndex::evaluate_all(const Point& x, std::span<double> h) const {
  for (int p = 0; p < size(); ++p) h[p] = evaluate(p, x);
}

int BasisIndex::linear_position(int axis) const {
  for (int p = 0; p < size(); ++p) {
    const auto& e = exponents[p];
    if (e[0] + e[1] + e[2] == 1 && e[axis] == 1) return p;
  }
  throw InvalidArgument("basis has no linear monomial for the requested axis");
}

double eval_kernel_1d(double x, double a) {
  const double z = std::abs(x) / a;
  if (z >= 1.0) return 0.0;
  if (z <= 0.5) return 2.0 / 3.0 - 4.0 * z * z + 4.0 * z * z * z;
  const double w = 1.0 - z;
  return 4.0 / 3.0 * w * w * w;
}

double KernelSpec::operator()(const Point& x) const {
  double v = 1.0;
  for (int k = 0; k < dim; ++k) v *= eval_kernel_1d(x[k], support[k]);
  return v;
}

bool KernelSpec::covers(const Point& x) const {
  for (int k = 0; k < dim; ++k) {
    if (!(std::abs(x[k]) < support[k])) return false;
  }
  return true;
}

KernelSpec make_kernel(const PeriodicGrid& grid, std::span<const double> a_tilde) {
  if (static_cast<int>(a_tilde.size()) != grid.dim()) {
    throw InvalidArgument("make_kernel: one normalized support per axis is required");
  }
  KernelSpec k;
  k.dim = grid.dim();
  for (int ax = 0; ax < grid.dim(); ++ax) {
    if (!(a_tilde[ax] > 0.0)) throw InvalidArgument("kernel support must be positive");
    k.support[ax] = a_tilde[ax] * grid.spacing(ax);
  }
  return k;
}

std::vector<double> gradient_selector(int axis, const BasisIndex& basis) {
  if (basis.degree < 1) {
    throw InvalidArgument("implicit gradients need a basis of degree >= 1");
  }
  if (axis < 0 || axis >= basis.dim) throw InvalidArgument("gradient axis out of range");
  std::vector<double> sel(basis.size(), 0.0);
  sel[basis.linear_position(axis)] = -1.0;
  return sel;
}

std::vector<double> value_selector(const BasisIndex& basis) {
  std::vector<double> sel(basis.size(), 0.0);
  sel[0] = 1.0;
  return sel;
}

std::size_t BasisTable::persistent_bytes() const {
  std::size_t bytes = 0;
  for (const auto* family : {&monomial, &weighted, &reflected}) {
    for (const auto& f : *family) bytes += f.size() * sizeof(double);
  }
  for (const auto* family : {&weighted_hat, &reflected_hat}) {
    for (const auto& f : *family) bytes += f.size() * sizeof(Complex);
  }
  return bytes;
}

BasisTable build_basis_table(const PeriodicGrid& grid, const BasisIndex& basis,
                             const KernelSpec& kernel, FftProvider& fft) {
  if (basis.dim != grid.dim() || kernel.dim != grid.dim()) {
    throw InvalidArgument("build_basis_table: basis, kernel and grid dimensions differ");
  }
  for (int k = 0; k < grid.dim(); ++k) {
    if (!(kernel.support[k] < 0.5 * grid.period(k))) {
      std::ostringstream os;
      os << "kernel support " << kernel.support[k] << " along axis " << k
         << " reaches half the period " << grid.period(k) << "; convolutions would wrap";
      throw InvalidArgument(os.str());
    }
  }

  const int s = basis.size();
  BasisTable t;
  t.basis = basis;
  t.kernel = kernel;
  t.monomial.assign(s, grid.make_field());
  t.weighted.assign(s, grid.make_field());
  t.reflected.assign(s, grid.make_field());

  std::vector<double> h(s);
  std::vector<double> h_neg(s);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point xi = grid.wrap_coordinate(i);
    const auto idx = grid.shape().unravel(i);
    // -xi evaluated as (-j) * spacing, the same path that produces xi at the
    // mirrored node, so the reflection identity holds bit for bit.
    Point neg{0, 0, 0};
    for (int k = 0; k < grid.dim(); ++k) neg[k] = (-grid.signed_offset(idx[k], k)) * grid.spacing(k);
    const double phi = kernel(xi);
    const double phi_neg = kernel(neg);
    basis.evaluate_all(xi, h);
    basis.evaluate_all(neg, h_neg);
    for (int p = 0; p < s; ++p) {
      t.monomial[p][i] = h[p];
      t.weighted[p][i] = h[p] * phi;
      t.reflected[p][i] = h_neg[p] * phi_neg;
    }
  }
  t.weighted_hat.reserve(s);
  t.reflected_hat.reserve(s);
  for (int p = 0; p < s; ++p) {
    t.weighted_hat.push_back(forward_half(t.weighted[p], fft));
    t.reflected_hat.push_back(forward_half(t.reflected[p], fft));
  }
  return t;
}

}  // namespace fcrkpm
