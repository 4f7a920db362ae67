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

#include "fcrkpm/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fcrkpm {

std::string Shape::describe() const {
  std::ostringstream os;
  os << '[';
  for (int k = 0; k < dim; ++k) {
    if (k) os << 'x';
    os << n[k];
  }
  os << ']';
  return os.str();
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b)) {
    throw ShapeMismatch(std::string(what) + ": shape " + a.describe() + " does not match " +
                        b.describe());
  }
}

RealField hadamard(const RealField& a, const RealField& b) {
  require_same_shape(a.shape(), b.shape(), "hadamard");
  RealField out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

RealField hadamard(const RealField& a, const RealField& b, const RealField& c) {
  require_same_shape(a.shape(), b.shape(), "hadamard");
  require_same_shape(a.shape(), c.shape(), "hadamard");
  RealField out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i] * c[i];
  return out;
}

void axpy(double alpha, const RealField& x, RealField& y) {
  require_same_shape(x.shape(), y.shape(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void accumulate_product(const RealField& a, const RealField& b, RealField& y) {
  require_same_shape(a.shape(), b.shape(), "accumulate_product");
  require_same_shape(a.shape(), y.shape(), "accumulate_product");
  for (std::size_t i = 0; i < a.size(); ++i) y[i] += a[i] * b[i];
}

double dot(const RealField& a, const RealField& b) {
  require_same_shape(a.shape(), b.shape(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const RealField& a) { return std::sqrt(dot(a, a)); }

double max_abs(const RealField& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double sum(const RealField& a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double max_relative_difference(const RealField& a, const RealField& b, double floor) {
  require_same_shape(a.shape(), b.shape(), "max_relative_difference");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  const double scale = std::max(max_abs(b), floor);
  if (scale == 0.0) return diff;
  return diff / scale;
}

}  // namespace fcrkpm
