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

#ifndef FCRKPM_MOMENT_HPP
#define FCRKPM_MOMENT_HPP

#include <array>
#include <utility>
#include <vector>

#include "fcrkpm/basis.hpp"
#include "fcrkpm/field.hpp"
#include "fcrkpm/grid.hpp"
#include "fcrkpm/spectral.hpp"

namespace fcrkpm {

/// Upper triangle of the masked moment matrix, one field per (p, q), p <= q.
struct MomentFields {
  int s = 0;
  std::vector<RealField> upper;

  static std::size_t slot(int p, int q, int s) {
    if (p > q) std::swap(p, q);
    return static_cast<std::size_t>(p * s - p * (p - 1) / 2 + (q - p));
  }
  const RealField& at(int p, int q) const { return upper[slot(p, q, s)]; }
};

/// Row extracts of M^-1 and the products every force term consumes.
///
///   b0[p]       =  [M^-1]_{1p}
///   bgrad[k][p] = -[M^-1]_{(2+k)p}
///   c0[p]       = chi V b0[p]
///   cgrad[k][p] = chi V bgrad[k][p]
///   chi_b0[p]   = chi b0[p]
struct MomentPrecomp {
  int dim = 1;
  int s = 0;
  RealField chi;
  RealField volume;
  std::vector<RealField> b0;
  std::array<std::vector<RealField>, 3> bgrad;
  std::vector<RealField> c0;
  std::array<std::vector<RealField>, 3> cgrad;
  std::vector<RealField> chi_b0;

  std::size_t persistent_bytes() const;
};

/// M_pq = (1 - chi) delta_pq + chi F^-1[F(chi) F(H_p H_q^a)].
MomentFields assemble_moment_fields(const RealField& chi, const BasisTable& table,
                                    FftProvider& fft = default_fft_provider());

/// Nodewise partial-pivot inversion. Throws SingularMoment when a pivot
/// falls below 1e-14 max|M|; condition numbers above 1e12 are warned about.
/// The gradient families are only filled when the basis has degree >= 1.
MomentPrecomp invert_moments(const MomentFields& moments, const RealField& chi,
                             const RealField& volume, const BasisIndex& basis,
                             const PeriodicGrid& grid);

MomentPrecomp build_moment_precomp(const PeriodicGrid& grid, const RealField& chi,
                                   const RealField& volume, const BasisTable& table,
                                   FftProvider& fft = default_fft_provider());

}  // namespace fcrkpm

#endif  // FCRKPM_MOMENT_HPP
