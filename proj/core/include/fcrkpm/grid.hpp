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

// Extended periodic box, its node lattice, characteristic masks and nodal
// quadrature weights.
//
// A bounded domain of length L_omega along each axis is padded on the far
// side by an extension l_e so that no kernel support wraps across the
// periodic seam. With m = floor(a_tilde), the extension is (m + 1) spacings.

#ifndef FCRKPM_GRID_HPP
#define FCRKPM_GRID_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fcrkpm/field.hpp"

namespace fcrkpm {

enum class ExtensionMode { FixCount, FixSpacing };

struct ExtensionPlan {
  int dim = 1;
  std::array<double, 3> omega_length{0, 0, 0};
  /// Kernel support in units of the spacing.
  std::array<double, 3> a_tilde{1, 1, 1};
  /// m = floor(a_tilde)
  std::array<int, 3> m{0, 0, 0};
  std::array<double, 3> extension{0, 0, 0};
  std::array<double, 3> spacing{1, 1, 1};
  std::array<int, 3> count{1, 1, 1};

  double period(int axis) const { return omega_length[axis] + extension[axis]; }
  /// Number of lattice nodes covering the closed domain along an axis.
  int omega_count(int axis) const { return count[axis] - m[axis]; }
  double support(int axis) const { return a_tilde[axis] * spacing[axis]; }
};

/// Chooses the box node counts first; spacing and extension follow.
ExtensionPlan plan_extension_fixed_count(std::span<const double> omega_length,
                                         std::span<const double> a_tilde,
                                         std::span<const int> counts);

/// Chooses the spacing first. The spacing is snapped so that the domain
/// length is an integer number of cells; a warning is emitted when it moves
/// or when the resulting count is not a power of two.
ExtensionPlan plan_extension_fixed_spacing(std::span<const double> omega_length,
                                           std::span<const double> a_tilde,
                                           std::span<const double> spacing);

/// Dispatches on mode; `request` holds counts (FixCount) or spacings.
ExtensionPlan plan_extension(std::span<const double> omega_length,
                             std::span<const double> a_tilde, ExtensionMode mode,
                             std::span<const double> request);

class PeriodicGrid {
 public:
  PeriodicGrid(int dim, const Point& origin, const Point& period, const std::array<int, 3>& count);

  int dim() const { return shape_.dim; }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return shape_.size(); }

  double origin(int axis) const { return origin_[axis]; }
  double period(int axis) const { return period_[axis]; }
  int count(int axis) const { return shape_.n[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double min_spacing() const;
  double cell_volume() const;

  Point coordinate(std::size_t index) const;
  double coordinate(std::size_t index, int axis) const;

  /// Minimal-image lattice offset of node index i along an axis, in
  /// [-n/2, n/2). A tie at exactly half the period goes to the negative side.
  int signed_offset(int i, int axis) const {
    const int n = shape_.n[axis];
    return 2 * i < n ? i : i - n;
  }

  /// Signed coordinate offset xi of a node relative to the box origin
  /// corner, wrapped to the minimal image.
  Point wrap_coordinate(std::size_t index) const;

  RealField make_field(double fill = 0.0) const { return RealField(shape_, fill); }

  template <typename F>
  RealField sample(F&& f) const {
    RealField out(shape_);
    for (std::size_t i = 0; i < size(); ++i) out[i] = f(coordinate(i));
    return out;
  }

 private:
  Shape shape_;
  Point origin_{0, 0, 0};
  Point period_{1, 1, 1};
  Point spacing_{1, 1, 1};
};

PeriodicGrid build_grid(const ExtensionPlan& plan, std::span<const double> origin);

/// Axis-aligned box [lo, hi] used as the physical domain.
struct BoxDomain {
  int dim = 1;
  Point lo{0, 0, 0};
  Point hi{0, 0, 0};

  double volume() const;
  bool contains(const Point& x, double tol) const;
  bool on_boundary(const Point& x, double tol) const;
  /// Whether x lies on the face normal to `axis` at the low (side 0) or
  /// high (side 1) end.
  bool on_face(const Point& x, int axis, int side, double tol) const;
};

struct BoxFace {
  int axis = 0;
  int side = 0;
};

using NodePredicate = std::function<bool(const Point&)>;

struct MaskSet {
  RealField chi;      ///< 1 on the closed domain, 0 on the padding
  RealField gamma_g;  ///< 1 on Dirichlet nodes
  RealField omega;    ///< chi - gamma_g: nodes whose coefficients are free
};

/// Builds chi, chi_gamma_g and chi_omega. Boundary nodes belong to the
/// domain (chi = 1). Throws if a Dirichlet node lies outside the domain.
MaskSet build_masks(const PeriodicGrid& grid, const NodePredicate& inside,
                    const NodePredicate& on_gamma_g);

/// Convenience: box domain with Dirichlet data on every face.
MaskSet build_box_masks(const PeriodicGrid& grid, const BoxDomain& box);

/// Nodal volumes for direct nodal integration: the cell volume at interior
/// nodes, halved once per axis along which the node borders the padding
/// (tensor-product trapezoid), zero where chi = 0.
RealField quadrature_weights(const PeriodicGrid& grid, const RealField& chi);

/// Nodal boundary measures on the given faces of a box (trapezoid rule
/// along each face; a node on several faces sums their contributions).
RealField face_weights(const PeriodicGrid& grid, const BoxDomain& box,
                       std::span<const BoxFace> faces);

/// Tolerance used when matching lattice nodes to domain boundaries.
double lattice_tolerance(const PeriodicGrid& grid);

bool is_mask(const RealField& f);

}  // namespace fcrkpm

#endif  // FCRKPM_GRID_HPP
