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


// Convenience bundle wiring a box domain through extension planning, masks,
// basis tables, moment inversion and the operators.

#ifndef FCRKPM_DISCRETIZATION_HPP
#define FCRKPM_DISCRETIZATION_HPP

#include <array>
#include <memory>

#include "fcrkpm/basis.hpp"
#include "fcrkpm/grid.hpp"
#include "fcrkpm/moment.hpp"
#include "fcrkpm/operators.hpp"
#include "fcrkpm/reference.hpp"
#include "fcrkpm/spectral.hpp"

namespace fcrkpm {

struct DiscretizationOptions {
  int dim = 1;
  Point lo{-1, -1, -1};
  Point hi{1, 1, 1};
  std::array<double, 3> a_tilde{1.5, 1.5, 1.5};
  int degree = 1;
  ExtensionMode mode = ExtensionMode::FixCount;
  /// Box node counts (FixCount) or requested spacings (FixSpacing).
  std::array<double, 3> request{16, 16, 16};
  /// Null selects the default provider.
  FftProvider* fft = nullptr;
};

class Discretization {
 public:
  explicit Discretization(const DiscretizationOptions& options);
  Discretization(const Discretization&) = delete;
  Discretization& operator=(const Discretization&) = delete;

  const DiscretizationOptions& options() const { return options_; }
  const ExtensionPlan& plan() const { return plan_; }
  const PeriodicGrid& grid() const { return grid_; }
  const BoxDomain& box() const { return box_; }
  const MaskSet& masks() const { return masks_; }
  const RealField& volume() const { return volume_; }
  const BasisIndex& basis() const { return basis_; }
  const KernelSpec& kernel() const { return kernel_; }
  const BasisTable& table() const { return table_; }
  const MomentPrecomp& precomp() const { return precomp_; }
  const FcOperators& ops() const { return *ops_; }
  FftProvider& fft() const { return *fft_; }

  /// Samples f on the domain nodes; 0 on the padding.
  template <typename F>
  RealField sample_domain(F&& f) const {
    RealField out = grid_.make_field();
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (masks_.chi[i] != 0.0) out[i] = f(grid_.coordinate(i));
    }
    return out;
  }

  std::size_t domain_nodes() const;
  std::unique_ptr<ReferenceRkpm> make_reference() const;

 private:
  DiscretizationOptions options_;
  FftProvider* fft_;
  ExtensionPlan plan_;
  PeriodicGrid grid_;
  BoxDomain box_;
  MaskSet masks_;
  RealField volume_;
  BasisIndex basis_;
  KernelSpec kernel_;
  BasisTable table_;
  MomentPrecomp precomp_;
  std::unique_ptr<FcOperators> ops_;
};

}  // namespace fcrkpm

#endif  // FCRKPM_DISCRETIZATION_HPP
