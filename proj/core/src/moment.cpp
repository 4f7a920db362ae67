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


#include "fcrkpm/moment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fcrkpm {

namespace {

// In-place LU with partial pivoting on a row-major s x s block. Returns the
// smallest pivot magnitude encountered.
double lu_factor(std::vector<double>& a, std::vector<int>& perm, int s) {
  double min_pivot = INFINITY;
  for (int i = 0; i < s; ++i) perm[i] = i;
  for (int col = 0; col < s; ++col) {
    int piv = col;
    double best = std::abs(a[col * s + col]);
    for (int r = col + 1; r < s; ++r) {
      const double v = std::abs(a[r * s + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    min_pivot = std::min(min_pivot, best);
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < s; ++c) std::swap(a[col * s + c], a[piv * s + c]);
      std::swap(perm[col], perm[piv]);
    }
    const double inv = 1.0 / a[col * s + col];
    for (int r = col + 1; r < s; ++r) {
      const double f = a[r * s + col] * inv;
      a[r * s + col] = f;
      for (int c = col + 1; c < s; ++c) a[r * s + c] -= f * a[col * s + c];
    }
  }
  return min_pivot;
}

void lu_solve(const std::vector<double>& lu, const std::vector<int>& perm, int s, int unit,
              double* x) {
  for (int i = 0; i < s; ++i) x[i] = perm[i] == unit ? 1.0 : 0.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < i; ++j) x[i] -= lu[i * s + j] * x[j];
  }
  for (int i = s - 1; i >= 0; --i) {
    for (int j = i + 1; j < s; ++j) x[i] -= lu[i * s + j] * x[j];
    x[i] /= lu[i * s + i];
  }
}

}  // namespace

std::size_t MomentPrecomp::persistent_bytes() const {
  std::size_t fields = 2 + b0.size() + c0.size() + chi_b0.size();
  for (int k = 0; k < 3; ++k) fields += bgrad[k].size() + cgrad[k].size();
  return fields * chi.size() * sizeof(double);
}

MomentFields assemble_moment_fields(const RealField& chi, const BasisTable& table,
                                    FftProvider& fft) {
  const int s = table.size();
  if (s == 0) throw InvalidArgument("assemble_moment_fields: empty basis table");
  require_same_shape(chi.shape(), table.weighted[0].shape(), "assemble_moment_fields");
  const SpectralField chi_hat = forward_half(chi, fft);

  MomentFields out;
  out.s = s;
  out.upper.reserve(static_cast<std::size_t>(s) * (s + 1) / 2);
  RealField product(chi.shape());
  for (int p = 0; p < s; ++p) {
    for (int q = p; q < s; ++q) {
      const RealField& hp = table.monomial[p];
      const RealField& hqa = table.weighted[q];
      for (std::size_t i = 0; i < product.size(); ++i) product[i] = hp[i] * hqa[i];
      SpectralField spec = forward_half(product, fft);
      for (std::size_t i = 0; i < spec.size(); ++i) {
        const Complex a = spec[i];
        const Complex b = chi_hat[i];
        spec[i] = {a.real() * b.real() - a.imag() * b.imag(),
                   a.real() * b.imag() + a.imag() * b.real()};
      }
      RealField m = inverse_half(spec, chi.shape(), fft);
      const double diag = p == q ? 1.0 : 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = (1.0 - chi[i]) * diag + chi[i] * m[i];
      out.upper.push_back(std::move(m));
    }
  }
  return out;
}

MomentPrecomp invert_moments(const MomentFields& moments, const RealField& chi,
                             const RealField& volume, const BasisIndex& basis,
                             const PeriodicGrid& grid) {
  const int s = basis.size();
  if (moments.s != s) throw InvalidArgument("invert_moments: basis size does not match moments");
  require_same_shape(chi.shape(), grid.shape(), "invert_moments");
  require_same_shape(volume.shape(), grid.shape(), "invert_moments");
  const int d = grid.dim();
  const bool gradients = basis.degree >= 1;
  std::array<int, 3> grad_row{0, 0, 0};
  if (gradients) {
    for (int k = 0; k < d; ++k) grad_row[k] = basis.linear_position(k);
  }

  MomentPrecomp pre;
  pre.dim = d;
  pre.s = s;
  pre.chi = chi;
  pre.volume = volume;
  const Shape& shape = grid.shape();
  pre.b0.assign(s, RealField(shape));
  if (gradients) {
    for (int k = 0; k < d; ++k) pre.bgrad[k].assign(s, RealField(shape));
  }

  std::vector<double> a(static_cast<std::size_t>(s) * s);
  std::vector<double> inv(static_cast<std::size_t>(s) * s);
  std::vector<int> perm(s);
  std::size_t ill_conditioned = 0;
  double worst_condition = 0.0;
  for (std::size_t node = 0; node < grid.size(); ++node) {
    double max_entry = 0.0;
    for (int p = 0; p < s; ++p) {
      for (int q = p; q < s; ++q) {
        const double v = moments.upper[MomentFields::slot(p, q, s)][node];
        a[p * s + q] = v;
        a[q * s + p] = v;
        max_entry = std::max(max_entry, std::abs(v));
      }
    }
    double norm_m = 0.0;
    for (int c = 0; c < s; ++c) {
      double col = 0.0;
      for (int r = 0; r < s; ++r) col += std::abs(a[r * s + c]);
      norm_m = std::max(norm_m, col);
    }
    const double min_pivot = lu_factor(a, perm, s);
    if (!(min_pivot >= 1e-14 * max_entry) || max_entry == 0.0) {
      throw SingularMoment(node, grid.coordinate(node));
    }
    // Column c of the inverse; by symmetry it is also row c.
    for (int c = 0; c < s; ++c) lu_solve(a, perm, s, c, &inv[static_cast<std::size_t>(c) * s]);
    double norm_inv = 0.0;
    for (int c = 0; c < s; ++c) {
      double col = 0.0;
      for (int r = 0; r < s; ++r) col += std::abs(inv[c * s + r]);
      norm_inv = std::max(norm_inv, col);
    }
    const double cond = norm_m * norm_inv;
    if (cond > 1e12) {
      ++ill_conditioned;
      worst_condition = std::max(worst_condition, cond);
    }
    for (int p = 0; p < s; ++p) pre.b0[p][node] = inv[p];
    if (gradients) {
      for (int k = 0; k < d; ++k) {
        const double* row = &inv[static_cast<std::size_t>(grad_row[k]) * s];
        for (int p = 0; p < s; ++p) pre.bgrad[k][p][node] = -row[p];
      }
    }
  }
  if (ill_conditioned > 0) {
    std::ostringstream os;
    os << ill_conditioned << " moment matrices have condition number above 1e12 (worst "
       << worst_condition << ")";
    warn(os.str());
  }

  pre.c0.reserve(s);
  pre.chi_b0.reserve(s);
  const RealField chi_v = hadamard(chi, volume);
  for (int p = 0; p < s; ++p) {
    pre.c0.push_back(hadamard(chi_v, pre.b0[p]));
    pre.chi_b0.push_back(hadamard(chi, pre.b0[p]));
  }
  if (gradients) {
    for (int k = 0; k < d; ++k) {
      pre.cgrad[k].reserve(s);
      for (int p = 0; p < s; ++p) pre.cgrad[k].push_back(hadamard(chi_v, pre.bgrad[k][p]));
    }
  }
  return pre;
}

MomentPrecomp build_moment_precomp(const PeriodicGrid& grid, const RealField& chi,
                                   const RealField& volume, const BasisTable& table,
                                   FftProvider& fft) {
  MomentFields moments = assemble_moment_fields(chi, table, fft);
  return invert_moments(moments, chi, volume, table.basis, grid);
}

}  // namespace fcrkpm
