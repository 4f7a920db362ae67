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

#ifndef FCRKPM_FIELD_HPP
#define FCRKPM_FIELD_HPP

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "fcrkpm/errors.hpp"

namespace fcrkpm {

using Point = std::array<double, 3>;
using Complex = std::complex<double>;

/// Lattice extents of a grid-shaped array. Unused axes have extent 1.
///
/// Every array in the library uses the same linearization: axis 0 varies
/// fastest, I = i0 + n0 * (i1 + n1 * i2).
struct Shape {
  int dim = 1;
  std::array<int, 3> n{1, 1, 1};

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
           static_cast<std::size_t>(n[2]);
  }

  std::size_t linear(const std::array<int, 3>& i) const {
    return static_cast<std::size_t>(i[0]) +
           static_cast<std::size_t>(n[0]) *
               (static_cast<std::size_t>(i[1]) +
                static_cast<std::size_t>(n[1]) * static_cast<std::size_t>(i[2]));
  }

  std::array<int, 3> unravel(std::size_t index) const {
    std::array<int, 3> i{0, 0, 0};
    i[0] = static_cast<int>(index % static_cast<std::size_t>(n[0]));
    index /= static_cast<std::size_t>(n[0]);
    i[1] = static_cast<int>(index % static_cast<std::size_t>(n[1]));
    i[2] = static_cast<int>(index / static_cast<std::size_t>(n[1]));
    return i;
  }

  bool operator==(const Shape&) const = default;

  std::string describe() const;
};

/// Allocator returning 64-byte aligned storage, so transform libraries can
/// use their vectorized kernels on field data.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t(alignment)));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t(alignment)); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

template <typename T>
class BasicField {
 public:
  using value_type = T;

  BasicField() = default;
  explicit BasicField(const Shape& shape, T fill = T{}) : shape_(shape), values_(shape.size(), fill) {}
  BasicField(const Shape& shape, const std::vector<T>& values)
      : shape_(shape), values_(values.begin(), values.end()) {
    if (values_.size() != shape_.size()) {
      throw ShapeMismatch("field storage does not match shape " + shape_.describe());
    }
  }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  void fill(T value) { std::fill(values_.begin(), values_.end(), value); }

 private:
  Shape shape_;
  AlignedVector<T> values_;
};

/// Real nodal values (coefficients, sources, masks, weights).
using RealField = BasicField<double>;
/// Complex Fourier coefficients, one per mode, same shape as the real field.
using SpectralField = BasicField<Complex>;

void require_same_shape(const Shape& a, const Shape& b, const char* what);

// Elementwise helpers. All of them check shapes.
RealField hadamard(const RealField& a, const RealField& b);
RealField hadamard(const RealField& a, const RealField& b, const RealField& c);
/// y += alpha * x
void axpy(double alpha, const RealField& x, RealField& y);
/// y += a o b
void accumulate_product(const RealField& a, const RealField& b, RealField& y);
double dot(const RealField& a, const RealField& b);
double norm2(const RealField& a);
double max_abs(const RealField& a);
double sum(const RealField& a);
/// max|a - b| / max(max|b|, floor)
double max_relative_difference(const RealField& a, const RealField& b, double floor = 0.0);

}  // namespace fcrkpm

#endif  // FCRKPM_FIELD_HPP
