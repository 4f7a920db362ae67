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


// Matrix-free weak-form terms evaluated with circular convolutions on the
// extended box. Every operator masks its input with chi internally.

#ifndef FCRKPM_OPERATORS_HPP
#define FCRKPM_OPERATORS_HPP

#include <array>
#include <span>
#include <vector>

#include "fcrkpm/basis.hpp"
#include "fcrkpm/field.hpp"
#include "fcrkpm/moment.hpp"
#include "fcrkpm/spectral.hpp"

namespace fcrkpm {

class FcOperators {
 public:
  /// Both tables must outlive the operators.
  FcOperators(const BasisTable& table, const MomentPrecomp& precomp,
              FftProvider& fft = default_fft_provider());

  int dim() const { return pre_.dim; }
  int basis_size() const { return pre_.s; }
  const Shape& shape() const { return pre_.chi.shape(); }
  const RealField& chi() const { return pre_.chi; }
  const RealField& volume() const { return pre_.volume; }
  const MomentPrecomp& precomp() const { return pre_; }
  const BasisTable& table() const { return table_; }
  FftProvider& fft() const { return fft_; }

  /// K d without forming K. 2(s+1) transforms.
  RealField internal_force(const RealField& d) const;
  /// chi A^k, the implicit gradient of u_h at the nodes, one field per axis.
  /// s+1 transforms.
  std::vector<RealField> implicit_gradient(const RealField& d) const;
  /// s+1 transforms.
  RealField external_force(const RealField& r) const;
  /// Nodal values of u_h. s+1 transforms.
  RealField evaluate_field(const RealField& d) const;
  /// Traction term; q and area must vanish away from the Neumann nodes.
  /// s+1 transforms.
  RealField boundary_force(const RealField& q, const RealField& area) const;
  /// Test-function-valued nonlinearity N(u_h). s+1 transforms.
  RealField nonlinear_force_scalar(const RealField& n) const;
  /// Gradient-paired nonlinearity, one field per axis. s+1 transforms.
  RealField nonlinear_force_gradient(std::span<const RealField> n) const;
  /// Consistent mass times ddot. 2(s+1) transforms.
  RealField mass_force(const RealField& ddot) const;
  /// Row sums of the consistent mass. Warns about non-positive entries on
  /// chi = 1 nodes.
  RealField lumped_mass() const;

  /// Bytes of the arrays kept alive between calls.
  std::size_t persistent_bytes() const;

 private:
  using Buffer = AlignedVector<Complex>;
  struct Workspace;

  void require_gradients(const char* what) const;
  /// Half spectrum of chi o d into w.hat.
  void masked_spectrum(const RealField& d, Workspace& w) const;
  /// out = F^-1(w.hat o H^a_p)
  void convolve_weighted(int p, Workspace& w, RealField& out) const;
  /// w.acc += F(g) o reflected kernel p
  void scatter_add(const RealField& g, int p, Workspace& w) const;
  /// chi o F^-1(w.acc)
  RealField finish(Workspace& w) const;

  const BasisTable& table_;
  const MomentPrecomp& pre_;
  FftProvider& fft_;
};

}  // namespace fcrkpm

#endif  // FCRKPM_OPERATORS_HPP
