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


#include "fcrkpm/manufactured.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fcrkpm {

namespace {

BoxDomain unit_box(int dim) {
  BoxDomain box;
  box.dim = dim;
  for (int k = 0; k < dim; ++k) {
    box.lo[k] = -1.0;
    box.hi[k] = 1.0;
  }
  return box;
}

}  // namespace

ManufacturedCase poisson_case(int dim) {
  if (dim < 1 || dim > 3) throw InvalidArgument("poisson_case: dimension must be 1, 2 or 3");
  ManufacturedCase c;
  c.name = "poisson-" + std::to_string(dim) + "d";
  c.dim = dim;
  c.domain = unit_box(dim);
  c.exact = [dim](const Point& x) {
    double u = 1.0;
    for (int k = 0; k < dim; ++k) u *= 1.0 - x[k] * x[k];
    return u;
  };
  // -lap prod(1 - x_k^2) = 2 sum_k prod_{j != k} (1 - x_j^2)
  c.source = [dim](const Point& x) {
    double r = 0.0;
    for (int k = 0; k < dim; ++k) {
      double term = 2.0;
      for (int j = 0; j < dim; ++j) {
        if (j != k) term *= 1.0 - x[j] * x[j];
      }
      r += term;
    }
    return r;
  };
  c.dirichlet = [](const Point&) { return 0.0; };
  return c;
}

ManufacturedCase cubic_reaction_case() {
  ManufacturedCase c;
  c.name = "cubic-reaction-1d";
  c.dim = 1;
  c.domain = unit_box(1);
  c.exact = [](const Point& x) { return 1.0 - x[0] * x[0]; };
  c.source = [](const Point& x) {
    const double u = 1.0 - x[0] * x[0];
    return 2.0 + u * u * u;
  };
  c.dirichlet = [](const Point&) { return 0.0; };
  return c;
}

ErrorReport nodal_errors(const RealField& uh, const RealField& exact, const RealField& chi) {
  require_same_shape(uh.shape(), exact.shape(), "nodal_errors");
  require_same_shape(uh.shape(), chi.shape(), "nodal_errors");
  double diff2 = 0.0;
  double ref2 = 0.0;
  double diff_max = 0.0;
  double ref_max = 0.0;
  for (std::size_t i = 0; i < uh.size(); ++i) {
    if (chi[i] == 0.0) continue;
    const double e = uh[i] - exact[i];
    diff2 += e * e;
    ref2 += exact[i] * exact[i];
    diff_max = std::max(diff_max, std::abs(e));
    ref_max = std::max(ref_max, std::abs(exact[i]));
  }
  if (ref2 == 0.0 || ref_max == 0.0) {
    throw InvalidArgument("nodal_errors: exact solution vanishes on every domain node");
  }
  ErrorReport r;
  r.l2 = std::sqrt(diff2 / ref2);
  r.linf = diff_max / ref_max;
  return r;
}

double continuous_l2_error_1d(const ReferenceRkpm& reference, std::span<const double> d,
                              const std::function<double(double)>& exact) {
  const NodeSet& nodes = reference.nodes();
  if (nodes.dim != 1) throw InvalidArgument("continuous_l2_error_1d: 1D node set required");
  if (d.size() != nodes.size()) throw ShapeMismatch("continuous_l2_error_1d: one coefficient per node");
  std::vector<double> xs;
  xs.reserve(nodes.size());
  for (const auto& x : nodes.x) xs.push_back(x[0]);
  std::sort(xs.begin(), xs.end());

  // 5-point Gauss-Legendre on [-1, 1].
  const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
  const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
  const std::array<double, 5> gx{-b, -a, 0.0, a, b};
  const std::array<double, 5> gw{wb, wa, 128.0 / 225.0, wa, wb};

  double total = 0.0;
  for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
    const double mid = 0.5 * (xs[c] + xs[c + 1]);
    const double half = 0.5 * (xs[c + 1] - xs[c]);
    for (int g = 0; g < 5; ++g) {
      const double x = mid + half * gx[g];
      const double e = reference.evaluate_at(Point{x, 0.0, 0.0}, d) - exact(x);
      total += gw[g] * half * e * e;
    }
  }
  return std::sqrt(total);
}

double convergence_slope(std::vector<std::pair<double, double>> points, std::size_t tail) {
  if (tail < 2) throw InvalidArgument("convergence_slope: at least two points are needed");
  if (points.size() < tail) {
    throw InvalidArgument("convergence_slope: fewer points than the requested tail");
  }
  for (const auto& [h, e] : points) {
    if (!(h > 0.0) || !(e > 0.0)) throw InvalidArgument("convergence_slope: h and e must be positive");
  }
  std::sort(points.begin(), points.end());
  points.resize(tail);
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [h, e] : points) {
    mx += std::log(h);
    my += std::log(e);
  }
  mx /= static_cast<double>(tail);
  my /= static_cast<double>(tail);
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [h, e] : points) {
    const double dx = std::log(h) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("convergence_slope: all h values coincide");
  return sxy / sxx;
}

}  // namespace fcrkpm
