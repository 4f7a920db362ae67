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

#include "fcrkpm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace fcrkpm {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

bool init_fftw_threads() {
  static const bool ok = fftw_init_threads() != 0;
  return ok;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Shape half_shape(const Shape& shape) {
  Shape h = shape;
  h.n[0] = shape.n[0] / 2 + 1;
  return h;
}

FftwProvider::FftwProvider(int threads) : threads_(std::max(1, threads)) {
  if (threads_ > 1) {
    std::lock_guard lock(fftw_planner_mutex());
    if (!init_fftw_threads()) threads_ = 1;
  }
}

FftwProvider::~FftwProvider() {
  std::lock_guard lock(fftw_planner_mutex());
  for (auto& [key, plan] : plans_) fftw_destroy_plan(static_cast<fftw_plan>(plan));
}

std::string FftwProvider::name() const {
  return threads_ > 1 ? "fftw3-threads(" + std::to_string(threads_) + ")" : "fftw3";
}

void* FftwProvider::plan_for(const Shape& shape, Kind kind, bool aligned) {
  const PlanKey key{shape.n, shape.dim, kind, aligned};
  std::lock_guard lock(mutex_);
  if (auto it = plans_.find(key); it != plans_.end()) return it->second;

  // FFTW is row-major (last index fastest); axis 0 is our fastest axis.
  int dims[3];
  for (int k = 0; k < shape.dim; ++k) dims[k] = shape.n[shape.dim - 1 - k];
  const std::size_t full = shape.size();
  // Planning scratch from fftw_malloc is SIMD-aligned.
  auto* a = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * full));
  auto* b = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * full));
  const unsigned flags = FFTW_ESTIMATE | (aligned ? 0u : FFTW_UNALIGNED);

  fftw_plan plan = nullptr;
  {
    std::lock_guard planner(fftw_planner_mutex());
    if (threads_ > 1) fftw_plan_with_nthreads(threads_);
    switch (kind) {
      case Kind::Forward:
        plan = fftw_plan_dft(shape.dim, dims, a, b, FFTW_FORWARD, flags);
        break;
      case Kind::Backward:
        plan = fftw_plan_dft(shape.dim, dims, a, b, FFTW_BACKWARD, flags);
        break;
      case Kind::RealForward:
        plan = fftw_plan_dft_r2c(shape.dim, dims, reinterpret_cast<double*>(a), b, flags);
        break;
      case Kind::RealBackward:
        plan = fftw_plan_dft_c2r(shape.dim, dims, a, reinterpret_cast<double*>(b), flags);
        break;
    }
    if (threads_ > 1) fftw_plan_with_nthreads(1);
  }
  fftw_free(a);
  fftw_free(b);
  if (plan == nullptr) throw Error("FFTW failed to create a plan for shape " + shape.describe());
  plans_.emplace(key, plan);
  return plan;
}

namespace {

bool simd_aligned(const void* a, const void* b) {
  return fftw_alignment_of(static_cast<double*>(const_cast<void*>(a))) == 0 &&
         fftw_alignment_of(static_cast<double*>(const_cast<void*>(b))) == 0;
}

void check_sizes(const Shape& shape, std::size_t in, std::size_t in_expected, std::size_t out,
                 std::size_t out_expected) {
  if (in != in_expected || out != out_expected) {
    throw ShapeMismatch("transform buffers do not match shape " + shape.describe());
  }
}

}  // namespace

void FftwProvider::forward(const Shape& shape, std::span<const Complex> in, std::span<Complex> out) {
  check_sizes(shape, in.size(), shape.size(), out.size(), shape.size());
  auto plan = static_cast<fftw_plan>(plan_for(shape, Kind::Forward, simd_aligned(in.data(), out.data())));
  // Out-of-place complex transforms leave the input untouched.
  fftw_execute_dft(plan, as_fftw(const_cast<Complex*>(in.data())), as_fftw(out.data()));
}

void FftwProvider::backward(const Shape& shape, std::span<const Complex> in,
                            std::span<Complex> out) {
  check_sizes(shape, in.size(), shape.size(), out.size(), shape.size());
  auto plan = static_cast<fftw_plan>(plan_for(shape, Kind::Backward, simd_aligned(in.data(), out.data())));
  fftw_execute_dft(plan, as_fftw(const_cast<Complex*>(in.data())), as_fftw(out.data()));
}

void FftwProvider::forward_real(const Shape& shape, std::span<const double> in,
                                std::span<Complex> out) {
  check_sizes(shape, in.size(), shape.size(), out.size(), half_shape(shape).size());
  auto plan = static_cast<fftw_plan>(plan_for(shape, Kind::RealForward, simd_aligned(in.data(), out.data())));
  // Out-of-place r2c preserves its input.
  fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()), as_fftw(out.data()));
}

void FftwProvider::backward_real(const Shape& shape, std::span<Complex> in, std::span<double> out) {
  check_sizes(shape, in.size(), half_shape(shape).size(), out.size(), shape.size());
  auto plan = static_cast<fftw_plan>(plan_for(shape, Kind::RealBackward, simd_aligned(in.data(), out.data())));
  fftw_execute_dft_c2r(plan, as_fftw(in.data()), out.data());
}

FftProvider& default_fft_provider() {
  static FftwProvider provider(1);
  return provider;
}

SpectralField forward(const RealField& a, FftProvider& fft) {
  AlignedVector<Complex> in(a.begin(), a.end());
  SpectralField out(a.shape());
  fft.forward(a.shape(), in, out.values());
  return out;
}

RealField inverse(const SpectralField& a, FftProvider& fft) {
  AlignedVector<Complex> out(a.size());
  fft.backward(a.shape(), a.values(), out);
  const double scale = 1.0 / static_cast<double>(a.size());
  RealField result(a.shape());
  double max_imag = 0.0;
  double max_real = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double re = out[i].real() * scale;
    const double im = out[i].imag() * scale;
    result[i] = re;
    max_real = std::max(max_real, std::abs(re));
    max_imag = std::max(max_imag, std::abs(im));
  }
  if (!(max_imag <= 1e-10 * (1.0 + max_real))) throw ImaginaryResidue(max_imag, max_real);
  return result;
}

SpectralField forward_half(const RealField& a, FftProvider& fft) {
  SpectralField out(half_shape(a.shape()));
  fft.forward_real(a.shape(), a.values(), out.values());
  return out;
}

RealField inverse_half(const SpectralField& half, const Shape& shape, FftProvider& fft) {
  require_same_shape(half.shape(), half_shape(shape), "inverse_half");
  SpectralField scratch = half;
  RealField out(shape);
  fft.backward_real(shape, scratch.values(), out.values());
  const double scale = 1.0 / static_cast<double>(shape.size());
  for (double& v : out) v *= scale;
  return out;
}

RealField circular_convolve(const RealField& a, const RealField& b, FftProvider& fft) {
  require_same_shape(a.shape(), b.shape(), "circular_convolve");
  SpectralField fa = forward(a, fft);
  const SpectralField fb = forward(b, fft);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  return inverse(fa, fft);
}

RealField direct_circular_convolve(const RealField& a, const RealField& b, std::size_t max_size) {
  require_same_shape(a.shape(), b.shape(), "direct_circular_convolve");
  const Shape& s = a.shape();
  if (s.size() > max_size) {
    throw InvalidArgument("direct_circular_convolve: " + std::to_string(s.size()) +
                          " nodes exceeds the oracle size guard of " + std::to_string(max_size));
  }
  RealField c(s);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto ik = s.unravel(k);
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const auto ij = s.unravel(j);
      std::array<int, 3> diff{0, 0, 0};
      for (int ax = 0; ax < 3; ++ax) diff[ax] = ((ik[ax] - ij[ax]) % s.n[ax] + s.n[ax]) % s.n[ax];
      acc += a[j] * b[s.linear(diff)];
    }
    c[k] = acc;
  }
  return c;
}

}  // namespace fcrkpm
