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


#include "fcrkpm/discretization.hpp"

#include <span>

namespace fcrkpm {

namespace {

ExtensionPlan make_plan(const DiscretizationOptions& o) {
  if (o.dim < 1 || o.dim > 3) throw InvalidArgument("discretization dimension must be 1, 2 or 3");
  std::array<double, 3> length{0, 0, 0};
  for (int k = 0; k < o.dim; ++k) length[k] = o.hi[k] - o.lo[k];
  const auto n = static_cast<std::size_t>(o.dim);
  return plan_extension(std::span<const double>(length.data(), n),
                        std::span<const double>(o.a_tilde.data(), n), o.mode,
                        std::span<const double>(o.request.data(), n));
}

BoxDomain make_box(const DiscretizationOptions& o) {
  BoxDomain box;
  box.dim = o.dim;
  for (int k = 0; k < o.dim; ++k) {
    box.lo[k] = o.lo[k];
    box.hi[k] = o.hi[k];
  }
  return box;
}

}  // namespace

Discretization::Discretization(const DiscretizationOptions& options)
    : options_(options),
      fft_(options.fft != nullptr ? options.fft : &default_fft_provider()),
      plan_(make_plan(options)),
      grid_(build_grid(plan_, std::span<const double>(options.lo.data(),
                                                      static_cast<std::size_t>(options.dim)))),
      box_(make_box(options)),
      masks_(build_box_masks(grid_, box_)),
      volume_(quadrature_weights(grid_, masks_.chi)),
      basis_(enumerate_basis(options.degree, options.dim)),
      kernel_(make_kernel(grid_, std::span<const double>(plan_.a_tilde.data(),
                                                         static_cast<std::size_t>(options.dim)))),
      table_(build_basis_table(grid_, basis_, kernel_, *fft_)),
      precomp_(build_moment_precomp(grid_, masks_.chi, volume_, table_, *fft_)),
      ops_(std::make_unique<FcOperators>(table_, precomp_, *fft_)) {}

std::size_t Discretization::domain_nodes() const {
  return static_cast<std::size_t>(sum(masks_.chi));
}

std::unique_ptr<ReferenceRkpm> Discretization::make_reference() const {
  return std::make_unique<ReferenceRkpm>(omega_nodes(grid_, masks_.chi, volume_), basis_, kernel_);
}

}  // namespace fcrkpm
