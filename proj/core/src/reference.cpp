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


#include "fcrkpm/reference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fcrkpm {

NodeSet omega_nodes(const PeriodicGrid& grid, const RealField& chi, const RealField& volume) {
  require_same_shape(grid.shape(), chi.shape(), "omega_nodes");
  require_same_shape(grid.shape(), volume.shape(), "omega_nodes");
  NodeSet nodes;
  nodes.dim = grid.dim();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (chi[i] == 0.0) continue;
    nodes.x.push_back(grid.coordinate(i));
    nodes.volume.push_back(volume[i]);
    nodes.grid_index.push_back(i);
  }
  return nodes;
}

std::vector<double> gather(const NodeSet& nodes, const RealField& f) {
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = f[nodes.grid_index[i]];
  return out;
}

RealField scatter(const NodeSet& nodes, std::span<const double> values, const Shape& shape) {
  if (values.size() != nodes.size()) throw ShapeMismatch("scatter: one value per node is required");
  RealField f(shape);
  for (std::size_t i = 0; i < nodes.size(); ++i) f[nodes.grid_index[i]] = values[i];
  return f;
}

CellList::CellList(const NodeSet& nodes, const KernelSpec& kernel) : nodes_(nodes), kernel_(kernel) {
  const int d = nodes.dim;
  Point hi{0, 0, 0};
  if (nodes.size() > 0) {
    lo_ = nodes.x[0];
    hi = nodes.x[0];
  }
  for (const auto& x : nodes.x) {
    for (int k = 0; k < d; ++k) {
      lo_[k] = std::min(lo_[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  }
  for (int k = 0; k < d; ++k) {
    n_[k] = std::max(1, static_cast<int>(std::floor((hi[k] - lo_[k]) / kernel.support[k])) + 1);
  }
  buckets_.resize(static_cast<std::size_t>(n_[0]) * n_[1] * n_[2]);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    std::array<int, 3> b{0, 0, 0};
    for (int k = 0; k < d; ++k) {
      b[k] = std::clamp(static_cast<int>(std::floor((nodes.x[j][k] - lo_[k]) / kernel.support[k])),
                        0, n_[k] - 1);
    }
    buckets_[b[0] + n_[0] * (b[1] + n_[1] * b[2])].push_back(static_cast<int>(j));
  }
}

void CellList::query(const Point& x, std::vector<int>& out) const {
  out.clear();
  const int d = nodes_.dim;
  std::array<int, 3> from{0, 0, 0};
  std::array<int, 3> to{0, 0, 0};
  for (int k = 0; k < d; ++k) {
    const int c = static_cast<int>(std::floor((x[k] - lo_[k]) / kernel_.support[k]));
    from[k] = std::max(0, c - 1);
    to[k] = std::min(n_[k] - 1, c + 1);
    if (from[k] > to[k]) return;
  }
  for (int c2 = from[2]; c2 <= to[2]; ++c2) {
    for (int c1 = from[1]; c1 <= to[1]; ++c1) {
      for (int c0 = from[0]; c0 <= to[0]; ++c0) {
        for (int j : buckets_[c0 + n_[0] * (c1 + n_[1] * c2)]) {
          const Point& xj = nodes_.x[j];
          bool inside = true;
          for (int k = 0; k < d && inside; ++k) inside = std::abs(x[k] - xj[k]) < kernel_.support[k];
          if (inside) out.push_back(j);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
}

std::size_t NeighborTable::max_count() const {
  std::size_t m = 0;
  for (std::size_t i = 0; i < size(); ++i) m = std::max(m, count(i));
  return m;
}

std::size_t NeighborTable::bytes() const {
  return offsets.size() * sizeof(std::size_t) + ids.size() * sizeof(int);
}

NeighborTable find_neighbors(const NodeSet& nodes, const KernelSpec& kernel) {
  CellList cells(nodes, kernel);
  NeighborTable table;
  table.offsets.reserve(nodes.size() + 1);
  table.offsets.push_back(0);
  std::vector<int> found;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    cells.query(nodes.x[i], found);
    table.ids.insert(table.ids.end(), found.begin(), found.end());
    table.offsets.push_back(table.ids.size());
  }
  return table;
}

namespace {

Point offset(const Point& x, const Point& xj, int dim) {
  Point r{0, 0, 0};
  for (int k = 0; k < dim; ++k) r[k] = x[k] - xj[k];
  return r;
}

}  // namespace

std::vector<double> moment_matrix_at(const Point& x, std::span<const int> candidates,
                                     const NodeSet& nodes, const BasisIndex& basis,
                                     const KernelSpec& kernel) {
  const int s = basis.size();
  std::vector<double> m(static_cast<std::size_t>(s) * s, 0.0);
  std::vector<double> h(s);
  for (int j : candidates) {
    const Point r = offset(x, nodes.x[j], nodes.dim);
    const double phi = kernel(r);
    if (phi == 0.0) continue;
    basis.evaluate_all(r, h);
    for (int p = 0; p < s; ++p) {
      for (int q = 0; q < s; ++q) m[p * s + q] += h[p] * h[q] * phi;
    }
  }
  return m;
}

ShapeValues shape_functions_at(const Point& x, std::span<const int> candidates,
                               const NodeSet& nodes, const BasisIndex& basis,
                               const KernelSpec& kernel, bool with_gradients) {
  const int s = basis.size();
  const int d = nodes.dim;
  const std::vector<double> mv = moment_matrix_at(x, candidates, nodes, basis, kernel);
  Eigen::MatrixXd m(s, s);
  for (int p = 0; p < s; ++p) {
    for (int q = 0; q < s; ++q) m(p, q) = mv[p * s + q];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-14);
  if (!lu.isInvertible()) {
    throw SingularMoment(candidates.empty() ? 0 : static_cast<std::size_t>(candidates[0]), x);
  }
  const Eigen::MatrixXd inv = lu.inverse();
  const bool grads = with_gradients && basis.degree >= 1;
  std::array<int, 3> grad_row{0, 0, 0};
  if (grads) {
    for (int k = 0; k < d; ++k) grad_row[k] = basis.linear_position(k);
  }

  ShapeValues out;
  out.ids.assign(candidates.begin(), candidates.end());
  out.psi.resize(candidates.size());
  if (grads) {
    for (int k = 0; k < d; ++k) out.grad[k].resize(candidates.size());
  }
  std::vector<double> h(s);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Point r = offset(x, nodes.x[candidates[c]], d);
    const double phi = kernel(r);
    basis.evaluate_all(r, h);
    double v = 0.0;
    for (int p = 0; p < s; ++p) v += inv(0, p) * h[p];
    out.psi[c] = v * phi;
    if (grads) {
      for (int k = 0; k < d; ++k) {
        double g = 0.0;
        for (int p = 0; p < s; ++p) g -= inv(grad_row[k], p) * h[p];
        out.grad[k][c] = g * phi;
      }
    }
  }
  return out;
}

void SparseOperator::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) acc += vals[e] * x[cols[e]];
    y[i] = acc;
  }
}

std::vector<double> SparseOperator::multiply(std::span<const double> x) const {
  std::vector<double> y(n);
  multiply(x, y);
  return y;
}

double SparseOperator::at(std::size_t i, std::size_t j) const {
  const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<int>(j));
  if (it == last || *it != static_cast<int>(j)) return 0.0;
  return vals[static_cast<std::size_t>(it - cols.begin())];
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (double v : vals) m = std::max(m, std::abs(v));
  return m;
}

double SparseOperator::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      m = std::max(m, std::abs(vals[e] - at(static_cast<std::size_t>(cols[e]), i)));
    }
  }
  return m;
}

std::vector<double> SparseOperator::row_sums() const {
  std::vector<double> r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) r[i] += vals[e];
  }
  return r;
}

std::size_t SparseOperator::bytes() const {
  return row_ptr.size() * sizeof(std::size_t) + cols.size() * sizeof(int) +
         vals.size() * sizeof(double);
}

namespace {

// Shared assembly kernel: `weight(S, a, b)` gives the contribution of
// quadrature node S to entry (row_ids[a], row_ids[b]) of its local block.
template <typename ShapeAt, typename Pair>
SparseOperator assemble(const NodeSet& nodes, const NeighborTable& neighbors, ShapeAt&& shape_at,
                        Pair&& pair) {
  const std::size_t n = nodes.size();
  // Position of node I inside the neighbor list of quadrature node S, for
  // every S in nbr(I); the neighbor relation is symmetric.
  std::vector<std::size_t> back(neighbors.ids.size());
  {
    std::vector<std::size_t> cursor(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
      const auto row = neighbors.row(s);
      for (std::size_t a = 0; a < row.size(); ++a) {
        const int i = row[a];
        back[neighbors.offsets[i] + cursor[i]++] = a;
      }
    }
  }

  SparseOperator k;
  k.n = n;
  k.row_ptr.assign(n + 1, 0);
  std::vector<long> slot(n, -1);
  std::vector<int> cols;
  for (std::size_t i = 0; i < n; ++i) {
    cols.clear();
    for (int s : neighbors.row(i)) {
      for (int j : neighbors.row(s)) {
        if (slot[j] < 0) {
          slot[j] = 0;
          cols.push_back(j);
        }
      }
    }
    std::sort(cols.begin(), cols.end());
    for (int j : cols) slot[j] = -1;
    k.row_ptr[i + 1] = k.row_ptr[i] + cols.size();
    k.cols.insert(k.cols.end(), cols.begin(), cols.end());
  }
  k.vals.assign(k.cols.size(), 0.0);

  std::vector<const ShapeValues*> at_node(n);
  for (std::size_t s = 0; s < n; ++s) at_node[s] = &shape_at(s);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = k.row_ptr[i];
    for (std::size_t e = begin; e < k.row_ptr[i + 1]; ++e) slot[k.cols[e]] = static_cast<long>(e);
    const auto row = neighbors.row(i);
    for (std::size_t t = 0; t < row.size(); ++t) {
      const std::size_t s = static_cast<std::size_t>(row[t]);
      const std::size_t a = back[neighbors.offsets[i] + t];
      const ShapeValues& sv = *at_node[s];
      for (std::size_t b = 0; b < sv.ids.size(); ++b) {
        k.vals[static_cast<std::size_t>(slot[sv.ids[b]])] += pair(s, sv, a, b);
      }
    }
    for (std::size_t e = begin; e < k.row_ptr[i + 1]; ++e) slot[k.cols[e]] = -1;
  }
  return k;
}

}  // namespace

SparseOperator assemble_stiffness(const NodeSet& nodes, const NeighborTable& neighbors,
                                  const BasisIndex& basis, const KernelSpec& kernel) {
  std::vector<ShapeValues> shapes;
  shapes.reserve(nodes.size());
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    shapes.push_back(shape_functions_at(nodes.x[s], neighbors.row(s), nodes, basis, kernel));
  }
  const int d = nodes.dim;
  return assemble(
      nodes, neighbors, [&](std::size_t s) -> const ShapeValues& { return shapes[s]; },
      [&](std::size_t s, const ShapeValues& sv, std::size_t a, std::size_t b) {
        double g = 0.0;
        for (int k = 0; k < d; ++k) g += sv.grad[k][a] * sv.grad[k][b];
        return nodes.volume[s] * g;
      });
}

ReferenceRkpm::ReferenceRkpm(NodeSet nodes, BasisIndex basis, KernelSpec kernel)
    : nodes_(std::move(nodes)),
      basis_(std::move(basis)),
      kernel_(kernel),
      cells_(nodes_, kernel_),
      neighbors_(find_neighbors(nodes_, kernel_)) {
  shapes_.reserve(nodes_.size());
  for (std::size_t s = 0; s < nodes_.size(); ++s) {
    shapes_.push_back(shape_functions_at(nodes_.x[s], neighbors_.row(s), nodes_, basis_, kernel_));
  }
}

ShapeValues ReferenceRkpm::shape_at(const Point& x, bool with_gradients) const {
  std::vector<int> candidates;
  cells_.query(x, candidates);
  return shape_functions_at(x, candidates, nodes_, basis_, kernel_, with_gradients);
}

SparseOperator ReferenceRkpm::stiffness() const {
  const int d = nodes_.dim;
  return assemble(
      nodes_, neighbors_, [&](std::size_t s) -> const ShapeValues& { return shapes_[s]; },
      [&](std::size_t s, const ShapeValues& sv, std::size_t a, std::size_t b) {
        double g = 0.0;
        for (int k = 0; k < d; ++k) g += sv.grad[k][a] * sv.grad[k][b];
        return nodes_.volume[s] * g;
      });
}

SparseOperator ReferenceRkpm::mass() const {
  return assemble(
      nodes_, neighbors_, [&](std::size_t s) -> const ShapeValues& { return shapes_[s]; },
      [&](std::size_t s, const ShapeValues& sv, std::size_t a, std::size_t b) {
        return nodes_.volume[s] * sv.psi[a] * sv.psi[b];
      });
}

std::vector<double> ReferenceRkpm::evaluate_field(std::span<const double> d) const {
  std::vector<double> u(nodes_.size(), 0.0);
  for (std::size_t s = 0; s < nodes_.size(); ++s) {
    const ShapeValues& sv = shapes_[s];
    for (std::size_t a = 0; a < sv.ids.size(); ++a) u[s] += sv.psi[a] * d[sv.ids[a]];
  }
  return u;
}

double ReferenceRkpm::evaluate_at(const Point& x, std::span<const double> d) const {
  const ShapeValues sv = shape_at(x, false);
  double u = 0.0;
  for (std::size_t a = 0; a < sv.ids.size(); ++a) u += sv.psi[a] * d[sv.ids[a]];
  return u;
}

std::vector<std::vector<double>> ReferenceRkpm::implicit_gradient(std::span<const double> d) const {
  std::vector<std::vector<double>> g(nodes_.dim, std::vector<double>(nodes_.size(), 0.0));
  for (std::size_t s = 0; s < nodes_.size(); ++s) {
    const ShapeValues& sv = shapes_[s];
    for (int k = 0; k < nodes_.dim; ++k) {
      for (std::size_t a = 0; a < sv.ids.size(); ++a) g[k][s] += sv.grad[k][a] * d[sv.ids[a]];
    }
  }
  return g;
}

std::vector<double> ReferenceRkpm::weighted_transpose(std::span<const double> w) const {
  std::vector<double> f(nodes_.size(), 0.0);
  for (std::size_t s = 0; s < nodes_.size(); ++s) {
    if (w[s] == 0.0) continue;
    const ShapeValues& sv = shapes_[s];
    for (std::size_t a = 0; a < sv.ids.size(); ++a) f[sv.ids[a]] += sv.psi[a] * w[s];
  }
  return f;
}

std::vector<double> ReferenceRkpm::nonlinear_force_gradient(
    const std::vector<std::vector<double>>& n) const {
  std::vector<double> f(nodes_.size(), 0.0);
  for (std::size_t s = 0; s < nodes_.size(); ++s) {
    const ShapeValues& sv = shapes_[s];
    for (int k = 0; k < nodes_.dim; ++k) {
      const double w = nodes_.volume[s] * n[k][s];
      for (std::size_t a = 0; a < sv.ids.size(); ++a) f[sv.ids[a]] += sv.grad[k][a] * w;
    }
  }
  return f;
}

std::vector<double> ReferenceRkpm::internal_force(std::span<const double> d) const {
  return nonlinear_force_gradient(implicit_gradient(d));
}

std::vector<double> ReferenceRkpm::external_force(std::span<const double> r) const {
  std::vector<double> w(nodes_.size());
  for (std::size_t s = 0; s < w.size(); ++s) w[s] = nodes_.volume[s] * r[s];
  return weighted_transpose(w);
}

std::vector<double> ReferenceRkpm::nonlinear_force_scalar(std::span<const double> n) const {
  return external_force(n);
}

std::vector<double> ReferenceRkpm::boundary_force(std::span<const double> q,
                                                  std::span<const double> area) const {
  std::vector<double> w(nodes_.size());
  for (std::size_t s = 0; s < w.size(); ++s) w[s] = area[s] * q[s];
  return weighted_transpose(w);
}

std::vector<double> ReferenceRkpm::mass_force(std::span<const double> ddot) const {
  const std::vector<double> u = evaluate_field(ddot);
  return external_force(u);
}

std::vector<double> ReferenceRkpm::lumped_mass() const { return mass().row_sums(); }

std::vector<double> ReferenceRkpm::moment_field(int p, int q) const {
  const int s = basis_.size();
  std::vector<double> m(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    m[i] = moment_matrix_at(nodes_.x[i], neighbors_.row(i), nodes_, basis_, kernel_)[p * s + q];
  }
  return m;
}

std::size_t ReferenceRkpm::persistent_bytes(const SparseOperator& k) const {
  std::size_t shape_bytes = 0;
  for (const auto& sv : shapes_) {
    shape_bytes += sv.ids.size() * sizeof(int) + sv.psi.size() * sizeof(double);
    for (int a = 0; a < nodes_.dim; ++a) shape_bytes += sv.grad[a].size() * sizeof(double);
  }
  return neighbors_.bytes() + shape_bytes + k.bytes();
}

}  // namespace fcrkpm
