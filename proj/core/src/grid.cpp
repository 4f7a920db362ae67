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

#include "fcrkpm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fcrkpm {

namespace {

int checked_dim(std::size_t n) {
  if (n < 1 || n > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  return static_cast<int>(n);
}

void check_common(std::span<const double> omega_length, std::span<const double> a_tilde) {
  if (omega_length.size() != a_tilde.size()) {
    throw InvalidArgument("plan_extension: one support per axis is required");
  }
  for (std::size_t k = 0; k < omega_length.size(); ++k) {
    if (!(omega_length[k] > 0.0)) throw InvalidArgument("plan_extension: domain length must be positive");
    if (!(a_tilde[k] >= 1.0)) throw InvalidArgument("plan_extension: normalized support must be >= 1");
  }
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ExtensionPlan plan_extension_fixed_count(std::span<const double> omega_length,
                                         std::span<const double> a_tilde,
                                         std::span<const int> counts) {
  ExtensionPlan plan;
  plan.dim = checked_dim(omega_length.size());
  check_common(omega_length, a_tilde);
  if (counts.size() != omega_length.size()) {
    throw InvalidArgument("plan_extension: one node count per axis is required");
  }
  for (int k = 0; k < plan.dim; ++k) {
    const int m = static_cast<int>(std::floor(a_tilde[k]));
    const int n = counts[k];
    if (n <= m + 1) {
      std::ostringstream os;
      os << "plan_extension: node count " << n << " along axis " << k
         << " leaves no room for the domain (need > " << m + 1 << ")";
      throw InvalidArgument(os.str());
    }
    if (n < 4) throw InvalidArgument("plan_extension: at least 4 nodes per axis are required");
    plan.omega_length[k] = omega_length[k];
    plan.a_tilde[k] = a_tilde[k];
    plan.m[k] = m;
    plan.count[k] = n;
    plan.extension[k] = (m + 1) * omega_length[k] / (n - m - 1);
    plan.spacing[k] = (omega_length[k] + plan.extension[k]) / n;
  }
  return plan;
}

ExtensionPlan plan_extension_fixed_spacing(std::span<const double> omega_length,
                                           std::span<const double> a_tilde,
                                           std::span<const double> spacing) {
  ExtensionPlan plan;
  plan.dim = checked_dim(omega_length.size());
  check_common(omega_length, a_tilde);
  if (spacing.size() != omega_length.size()) {
    throw InvalidArgument("plan_extension: one spacing per axis is required");
  }
  for (int k = 0; k < plan.dim; ++k) {
    if (!(spacing[k] > 0.0)) throw InvalidArgument("plan_extension: spacing must be positive");
    const int m = static_cast<int>(std::floor(a_tilde[k]));
    const double cells_exact = omega_length[k] / spacing[k];
    const int cells = std::max(1, static_cast<int>(std::lround(cells_exact)));
    const double h = omega_length[k] / cells;
    if (std::abs(h - spacing[k]) > 1e-12 * spacing[k]) {
      std::ostringstream os;
      os << "spacing along axis " << k << " adjusted from " << spacing[k] << " to " << h
         << " so the domain spans an integer number of cells";
      warn(os.str());
    }
    const int n = cells + m + 1;
    if (n < 4) throw InvalidArgument("plan_extension: at least 4 nodes per axis are required");
    if (!is_power_of_two(n)) {
      std::ostringstream os;
      os << "node count " << n << " along axis " << k
         << " is not a power of two; transforms will be slower";
      warn(os.str());
    }
    plan.omega_length[k] = omega_length[k];
    plan.a_tilde[k] = a_tilde[k];
    plan.m[k] = m;
    plan.count[k] = n;
    plan.spacing[k] = h;
    plan.extension[k] = (m + 1) * h;
  }
  return plan;
}

ExtensionPlan plan_extension(std::span<const double> omega_length, std::span<const double> a_tilde,
                             ExtensionMode mode, std::span<const double> request) {
  if (mode == ExtensionMode::FixSpacing) {
    return plan_extension_fixed_spacing(omega_length, a_tilde, request);
  }
  std::vector<int> counts;
  for (double v : request) {
    if (v != std::floor(v)) throw InvalidArgument("plan_extension: node counts must be integers");
    counts.push_back(static_cast<int>(v));
  }
  return plan_extension_fixed_count(omega_length, a_tilde, counts);
}

PeriodicGrid::PeriodicGrid(int dim, const Point& origin, const Point& period,
                           const std::array<int, 3>& count) {
  if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  shape_.dim = dim;
  for (int k = 0; k < 3; ++k) {
    if (k < dim) {
      if (count[k] < 4) throw InvalidArgument("grid needs at least 4 nodes per axis");
      if (!(period[k] > 0.0)) throw InvalidArgument("grid period must be positive");
      shape_.n[k] = count[k];
      origin_[k] = origin[k];
      period_[k] = period[k];
      spacing_[k] = period[k] / count[k];
    } else {
      shape_.n[k] = 1;
      origin_[k] = 0.0;
      period_[k] = 1.0;
      spacing_[k] = 1.0;
    }
  }
}

double PeriodicGrid::min_spacing() const {
  double h = spacing_[0];
  for (int k = 1; k < dim(); ++k) h = std::min(h, spacing_[k]);
  return h;
}

double PeriodicGrid::cell_volume() const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) v *= spacing_[k];
  return v;
}

Point PeriodicGrid::coordinate(std::size_t index) const {
  const auto i = shape_.unravel(index);
  Point x{0, 0, 0};
  for (int k = 0; k < dim(); ++k) x[k] = origin_[k] + i[k] * spacing_[k];
  return x;
}

double PeriodicGrid::coordinate(std::size_t index, int axis) const {
  return origin_[axis] + shape_.unravel(index)[axis] * spacing_[axis];
}

Point PeriodicGrid::wrap_coordinate(std::size_t index) const {
  const auto i = shape_.unravel(index);
  Point xi{0, 0, 0};
  for (int k = 0; k < dim(); ++k) xi[k] = signed_offset(i[k], k) * spacing_[k];
  return xi;
}

PeriodicGrid build_grid(const ExtensionPlan& plan, std::span<const double> origin) {
  if (static_cast<int>(origin.size()) != plan.dim) {
    throw InvalidArgument("build_grid: one origin coordinate per axis is required");
  }
  Point o{0, 0, 0};
  Point period{1, 1, 1};
  for (int k = 0; k < plan.dim; ++k) {
    o[k] = origin[k];
    period[k] = plan.period(k);
  }
  return PeriodicGrid(plan.dim, o, period, plan.count);
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (int k = 0; k < dim; ++k) v *= hi[k] - lo[k];
  return v;
}

bool BoxDomain::contains(const Point& x, double tol) const {
  for (int k = 0; k < dim; ++k) {
    if (x[k] < lo[k] - tol || x[k] > hi[k] + tol) return false;
  }
  return true;
}

bool BoxDomain::on_face(const Point& x, int axis, int side, double tol) const {
  if (!contains(x, tol)) return false;
  const double plane = side == 0 ? lo[axis] : hi[axis];
  return std::abs(x[axis] - plane) <= tol;
}

bool BoxDomain::on_boundary(const Point& x, double tol) const {
  for (int k = 0; k < dim; ++k) {
    if (on_face(x, k, 0, tol) || on_face(x, k, 1, tol)) return true;
  }
  return false;
}

double lattice_tolerance(const PeriodicGrid& grid) { return 1e-9 * grid.min_spacing(); }

MaskSet build_masks(const PeriodicGrid& grid, const NodePredicate& inside,
                    const NodePredicate& on_gamma_g) {
  MaskSet masks{grid.make_field(), grid.make_field(), grid.make_field()};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.coordinate(i);
    const bool in = inside(x);
    const bool g = on_gamma_g ? on_gamma_g(x) : false;
    if (g && !in) {
      std::ostringstream os;
      os << "Dirichlet node " << i << " at (" << x[0] << ", " << x[1] << ", " << x[2]
         << ") lies outside the domain";
      throw InvalidArgument(os.str());
    }
    masks.chi[i] = in ? 1.0 : 0.0;
    masks.gamma_g[i] = g ? 1.0 : 0.0;
    masks.omega[i] = masks.chi[i] - masks.gamma_g[i];
  }
  return masks;
}

MaskSet build_box_masks(const PeriodicGrid& grid, const BoxDomain& box) {
  const double tol = lattice_tolerance(grid);
  return build_masks(
      grid, [&](const Point& x) { return box.contains(x, tol); },
      [&](const Point& x) { return box.on_boundary(x, tol); });
}

RealField quadrature_weights(const PeriodicGrid& grid, const RealField& chi) {
  require_same_shape(grid.shape(), chi.shape(), "quadrature_weights");
  const Shape& shape = grid.shape();
  const double cell = grid.cell_volume();
  RealField v = grid.make_field();
  for (std::size_t index = 0; index < grid.size(); ++index) {
    if (chi[index] == 0.0) continue;
    auto i = shape.unravel(index);
    double w = cell;
    for (int k = 0; k < grid.dim(); ++k) {
      const int n = shape.n[k];
      auto lo = i;
      auto hi = i;
      lo[k] = (i[k] + n - 1) % n;
      hi[k] = (i[k] + 1) % n;
      if (chi[shape.linear(lo)] == 0.0 || chi[shape.linear(hi)] == 0.0) w *= 0.5;
    }
    v[index] = w;
  }
  return v;
}

RealField face_weights(const PeriodicGrid& grid, const BoxDomain& box,
                       std::span<const BoxFace> faces) {
  const double tol = lattice_tolerance(grid);
  RealField a = grid.make_field();
  for (std::size_t index = 0; index < grid.size(); ++index) {
    const Point x = grid.coordinate(index);
    for (const BoxFace& face : faces) {
      if (!box.on_face(x, face.axis, face.side, tol)) continue;
      double w = 1.0;
      for (int k = 0; k < grid.dim(); ++k) {
        if (k == face.axis) continue;
        double h = grid.spacing(k);
        if (box.on_face(x, k, 0, tol) || box.on_face(x, k, 1, tol)) h *= 0.5;
        w *= h;
      }
      a[index] += w;
    }
  }
  return a;
}

bool is_mask(const RealField& f) {
  return std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

}  // namespace fcrkpm
