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


// Direct-summation RKPM on the bounded node set: neighbor search, shape
// functions at arbitrary points, sparse stiffness and mass assembly, and
// literal nested-loop versions of every force term. Serves both as the
// correctness oracle for the convolution path and as the baseline it is
// benchmarked against.

#ifndef FCRKPM_REFERENCE_HPP
#define FCRKPM_REFERENCE_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fcrkpm/basis.hpp"
#include "fcrkpm/field.hpp"
#include "fcrkpm/grid.hpp"

namespace fcrkpm {

/// Domain nodes with their nodal-integration weights.
struct NodeSet {
  int dim = 1;
  std::vector<Point> x;
  std::vector<double> volume;
  /// Position of each node on the periodic grid it was taken from, if any.
  std::vector<std::size_t> grid_index;

  std::size_t size() const { return x.size(); }
};

/// The chi = 1 nodes of a grid, in grid order.
NodeSet omega_nodes(const PeriodicGrid& grid, const RealField& chi, const RealField& volume);
std::vector<double> gather(const NodeSet& nodes, const RealField& f);
RealField scatter(const NodeSet& nodes, std::span<const double> values, const Shape& shape);

/// Uniform bucket grid with one bucket per support width.
class CellList {
 public:
  CellList(const NodeSet& nodes, const KernelSpec& kernel);
  /// Nodes J with |x - x_J|_k < a_k on every axis, sorted ascending.
  void query(const Point& x, std::vector<int>& out) const;

 private:
  const NodeSet& nodes_;
  KernelSpec kernel_;
  Point lo_{0, 0, 0};
  std::array<int, 3> n_{1, 1, 1};
  std::vector<std::vector<int>> buckets_;
};

struct NeighborTable {
  std::vector<std::size_t> offsets;
  std::vector<int> ids;

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const int> row(std::size_t i) const {
    return {ids.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  std::size_t count(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
  std::size_t max_count() const;
  std::size_t bytes() const;
};

NeighborTable find_neighbors(const NodeSet& nodes, const KernelSpec& kernel);

/// Shape functions and implicit gradients of the nodes in `ids`, at a point.
struct ShapeValues {
  std::vector<int> ids;
  std::vector<double> psi;
  std::array<std::vector<double>, 3> grad;
};

/// Throws SingularMoment when fewer than s candidates are effective.
ShapeValues shape_functions_at(const Point& x, std::span<const int> candidates,
                               const NodeSet& nodes, const BasisIndex& basis,
                               const KernelSpec& kernel, bool with_gradients = true);

/// s x s moment matrix at x (row-major).
std::vector<double> moment_matrix_at(const Point& x, std::span<const int> candidates,
                                     const NodeSet& nodes, const BasisIndex& basis,
                                     const KernelSpec& kernel);

/// Square sparse matrix in compressed-row form with sorted columns.
struct SparseOperator {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;

  std::size_t nnz() const { return vals.size(); }
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  double at(std::size_t i, std::size_t j) const;
  double max_abs() const;
  /// max |A_ij - A_ji|
  double asymmetry() const;
  std::vector<double> row_sums() const;
  std::size_t bytes() const;
};

/// K_IJ = sum_S V_S grad Psi_I(x_S) . grad Psi_J(x_S), shape functions
/// evaluated on the fly at every quadrature node.
SparseOperator assemble_stiffness(const NodeSet& nodes, const NeighborTable& neighbors,
                                  const BasisIndex& basis, const KernelSpec& kernel);

/// Reference model with shape functions cached at every node.
class ReferenceRkpm {
 public:
  ReferenceRkpm(NodeSet nodes, BasisIndex basis, KernelSpec kernel);
  ReferenceRkpm(const ReferenceRkpm&) = delete;
  ReferenceRkpm& operator=(const ReferenceRkpm&) = delete;

  const NodeSet& nodes() const { return nodes_; }
  const NeighborTable& neighbors() const { return neighbors_; }
  const BasisIndex& basis() const { return basis_; }
  const KernelSpec& kernel() const { return kernel_; }
  const ShapeValues& shape_at_node(std::size_t s) const { return shapes_[s]; }
  /// Shape functions at an arbitrary point, with candidates from the cell list.
  ShapeValues shape_at(const Point& x, bool with_gradients = true) const;

  SparseOperator stiffness() const;
  SparseOperator mass() const;

  std::vector<double> evaluate_field(std::span<const double> d) const;
  /// Value of u_h at an arbitrary point.
  double evaluate_at(const Point& x, std::span<const double> d) const;
  std::vector<std::vector<double>> implicit_gradient(std::span<const double> d) const;
  std::vector<double> internal_force(std::span<const double> d) const;
  std::vector<double> external_force(std::span<const double> r) const;
  std::vector<double> boundary_force(std::span<const double> q, std::span<const double> area) const;
  std::vector<double> nonlinear_force_scalar(std::span<const double> n) const;
  std::vector<double> nonlinear_force_gradient(const std::vector<std::vector<double>>& n) const;
  std::vector<double> mass_force(std::span<const double> ddot) const;
  std::vector<double> lumped_mass() const;
  /// Direct sum of the (p, q) moment entry at every node.
  std::vector<double> moment_field(int p, int q) const;

  /// Neighbor table, cached shape functions and the given assembled matrix.
  std::size_t persistent_bytes(const SparseOperator& k) const;

 private:
  std::vector<double> weighted_transpose(std::span<const double> w) const;

  NodeSet nodes_;
  BasisIndex basis_;
  KernelSpec kernel_;
  CellList cells_;
  NeighborTable neighbors_;
  std::vector<ShapeValues> shapes_;
};

}  // namespace fcrkpm

#endif  // FCRKPM_REFERENCE_HPP
