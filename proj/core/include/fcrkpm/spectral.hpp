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

// d-dimensional DFT and circular convolution.
//
// Convention: the forward transform is unnormalized,
//   a^_k = sum_j a_j exp(-2 pi i k.j / N),
// and the inverse carries the full 1/(N0 N1 N2) factor.

#ifndef FCRKPM_SPECTRAL_HPP
#define FCRKPM_SPECTRAL_HPP

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>

#include "fcrkpm/field.hpp"

namespace fcrkpm {

/// Shape of the non-redundant half spectrum of a real field: axis 0 keeps
/// n0 / 2 + 1 modes, the others are complete.
Shape half_shape(const Shape& shape);

/// Transform backend. All directions are unnormalized.
///
/// `forward`/`backward` are complex-to-complex; `backward` computes
/// sum_k a^_k exp(+2 pi i k.j / N). `forward_real` writes the half
/// spectrum of a real field and `backward_real` is its inverse up to the
/// factor N; it may overwrite its input.
class FftProvider {
 public:
  virtual ~FftProvider() = default;
  virtual void forward(const Shape& shape, std::span<const Complex> in, std::span<Complex> out) = 0;
  virtual void backward(const Shape& shape, std::span<const Complex> in, std::span<Complex> out) = 0;
  virtual void forward_real(const Shape& shape, std::span<const double> in,
                            std::span<Complex> out) = 0;
  virtual void backward_real(const Shape& shape, std::span<Complex> in, std::span<double> out) = 0;
  virtual std::string name() const = 0;
};

/// FFTW-backed provider. Plans are created once per (shape, kind, buffer
/// alignment) with FFTW_ESTIMATE, so repeated transforms are bit-for-bit
/// reproducible. Plan creation is serialized; execution is reentrant.
class FftwProvider final : public FftProvider {
 public:
  explicit FftwProvider(int threads = 1);
  ~FftwProvider() override;
  FftwProvider(const FftwProvider&) = delete;
  FftwProvider& operator=(const FftwProvider&) = delete;

  void forward(const Shape& shape, std::span<const Complex> in, std::span<Complex> out) override;
  void backward(const Shape& shape, std::span<const Complex> in, std::span<Complex> out) override;
  void forward_real(const Shape& shape, std::span<const double> in, std::span<Complex> out) override;
  void backward_real(const Shape& shape, std::span<Complex> in, std::span<double> out) override;
  std::string name() const override;
  int threads() const { return threads_; }

 private:
  enum class Kind { Forward, Backward, RealForward, RealBackward };
  struct PlanKey {
    std::array<int, 3> n;
    int dim;
    Kind kind;
    bool aligned;
    auto operator<=>(const PlanKey&) const = default;
  };
  void* plan_for(const Shape& shape, Kind kind, bool aligned);

  int threads_;
  std::mutex mutex_;
  std::map<PlanKey, void*> plans_;
};

/// Decorator that counts transforms passing through it.
class CountingFftProvider final : public FftProvider {
 public:
  explicit CountingFftProvider(FftProvider& inner) : inner_(inner) {}

  void forward(const Shape& shape, std::span<const Complex> in, std::span<Complex> out) override {
    ++forward_;
    inner_.forward(shape, in, out);
  }
  void backward(const Shape& shape, std::span<const Complex> in, std::span<Complex> out) override {
    ++backward_;
    inner_.backward(shape, in, out);
  }
  void forward_real(const Shape& shape, std::span<const double> in, std::span<Complex> out) override {
    ++forward_;
    inner_.forward_real(shape, in, out);
  }
  void backward_real(const Shape& shape, std::span<Complex> in, std::span<double> out) override {
    ++backward_;
    inner_.backward_real(shape, in, out);
  }
  std::string name() const override { return "counting(" + inner_.name() + ")"; }

  std::size_t forward_count() const { return forward_; }
  std::size_t backward_count() const { return backward_; }
  std::size_t total() const { return forward_ + backward_; }
  void reset() {
    forward_ = 0;
    backward_ = 0;
  }

 private:
  FftProvider& inner_;
  std::atomic<std::size_t> forward_{0};
  std::atomic<std::size_t> backward_{0};
};

/// Process-wide single-threaded FFTW provider.
FftProvider& default_fft_provider();

SpectralField forward(const RealField& a, FftProvider& fft = default_fft_provider());

/// Inverse transform returning the real part. Throws ImaginaryResidue when
/// max|imag| > 1e-10 (1 + max|real|).
RealField inverse(const SpectralField& a, FftProvider& fft = default_fft_provider());

/// Half spectrum of a real field, shaped by half_shape().
SpectralField forward_half(const RealField& a, FftProvider& fft = default_fft_provider());

/// Real field from its half spectrum, including the 1/N factor.
RealField inverse_half(const SpectralField& half, const Shape& shape,
                       FftProvider& fft = default_fft_provider());

/// c = F^-1 (F(a) o F(b))
RealField circular_convolve(const RealField& a, const RealField& b,
                            FftProvider& fft = default_fft_provider());

/// O(N^2) reference: c_k = sum_j a_j b_{(k - j) mod N}, per axis.
/// Refuses fields larger than `max_size` nodes.
RealField direct_circular_convolve(const RealField& a, const RealField& b,
                                   std::size_t max_size = 4096);

}  // namespace fcrkpm

#endif  // FCRKPM_SPECTRAL_HPP
