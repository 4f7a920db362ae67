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


#include "fcrkpm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fcrkpm {

namespace {

// Plain complex product. std::complex operator* goes through the C99
// Annex G NaN-recovery path, which dominates the pointwise loops.
inline Complex mul(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace

struct FcOperators::Workspace {
  explicit Workspace(const Shape& shape)
      : half(half_shape(shape)), hat(half.size()), scratch(half.size()), acc(half.size()), real(shape) {}

  Shape half;
  Buffer hat;
  Buffer scratch;
  Buffer acc;
  RealField real;
};

FcOperators::FcOperators(const BasisTable& table, const MomentPrecomp& precomp, FftProvider& fft)
    : table_(table), pre_(precomp), fft_(fft) {
  if (table.size() != precomp.s) {
    throw InvalidArgument("FcOperators: basis table and moment precompute disagree on s");
  }
  require_same_shape(table.weighted_hat[0].shape(), half_shape(precomp.chi.shape()), "FcOperators");
}

void FcOperators::require_gradients(const char* what) const {
  if (pre_.bgrad[0].empty()) {
    throw InvalidArgument(std::string(what) + " needs a basis of degree >= 1");
  }
}

void FcOperators::masked_spectrum(const RealField& d, Workspace& w) const {
  require_same_shape(d.shape(), shape(), "FcOperators");
  for (std::size_t i = 0; i < d.size(); ++i) w.real[i] = pre_.chi[i] * d[i];
  fft_.forward_real(shape(), w.real.values(), w.hat);
}

void FcOperators::convolve_weighted(int p, Workspace& w, RealField& out) const {
  const SpectralField& h = table_.weighted_hat[p];
  const double scale = 1.0 / static_cast<double>(out.size());
  for (std::size_t i = 0; i < w.hat.size(); ++i) w.scratch[i] = scale * mul(w.hat[i], h[i]);
  fft_.backward_real(shape(), w.scratch, out.values());
}

void FcOperators::scatter_add(const RealField& g, int p, Workspace& w) const {
  fft_.forward_real(shape(), g.values(), w.scratch);
  const SpectralField& h = table_.reflected_hat[p];
  for (std::size_t i = 0; i < w.acc.size(); ++i) w.acc[i] += mul(w.scratch[i], h[i]);
}

RealField FcOperators::finish(Workspace& w) const {
  RealField f(shape());
  fft_.backward_real(shape(), w.acc, f.values());
  const double scale = 1.0 / static_cast<double>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= scale * pre_.chi[i];
  return f;
}

std::vector<RealField> FcOperators::implicit_gradient(const RealField& d) const {
  require_gradients("implicit_gradient");
  Workspace w(shape());
  masked_spectrum(d, w);
  RealField dp(shape());
  std::vector<RealField> grad(dim(), RealField(shape()));
  for (int p = 0; p < pre_.s; ++p) {
    convolve_weighted(p, w, dp);
    for (int k = 0; k < dim(); ++k) accumulate_product(pre_.bgrad[k][p], dp, grad[k]);
  }
  for (auto& g : grad) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= pre_.chi[i];
  }
  return grad;
}

RealField FcOperators::internal_force(const RealField& d) const {
  require_gradients("internal_force");
  // Same sequence as implicit_gradient followed by nonlinear_force_gradient,
  // with the per-axis passes fused.
  Workspace w(shape());
  masked_spectrum(d, w);
  const std::size_t n = w.real.size();
  const int nd = dim();
  std::vector<RealField> a(nd, RealField(shape()));
  RealField& dp = w.real;
  for (int p = 0; p < pre_.s; ++p) {
    convolve_weighted(p, w, dp);
    for (int k = 0; k < nd; ++k) {
      double* ak = a[k].data();
      const double* b = pre_.bgrad[k][p].data();
      for (std::size_t i = 0; i < n; ++i) ak[i] += b[i] * dp[i];
    }
  }
  RealField& g = w.real;
  for (int p = 0; p < pre_.s; ++p) {
    const double* c0 = pre_.cgrad[0][p].data();
    const double* a0 = a[0].data();
    for (std::size_t i = 0; i < n; ++i) g[i] = c0[i] * a0[i];
    for (int k = 1; k < nd; ++k) {
      const double* ck = pre_.cgrad[k][p].data();
      const double* ak = a[k].data();
      for (std::size_t i = 0; i < n; ++i) g[i] += ck[i] * ak[i];
    }
    scatter_add(g, p, w);
  }
  return finish(w);
}

RealField FcOperators::nonlinear_force_gradient(std::span<const RealField> n) const {
  require_gradients("gradient force");
  if (static_cast<int>(n.size()) != dim()) {
    throw InvalidArgument("nonlinear_force_gradient: one field per axis is required");
  }
  for (const auto& f : n) require_same_shape(f.shape(), shape(), "nonlinear_force_gradient");
  Workspace w(shape());
  RealField& g = w.real;
  for (int p = 0; p < pre_.s; ++p) {
    g.fill(0.0);
    for (int k = 0; k < dim(); ++k) accumulate_product(pre_.cgrad[k][p], n[k], g);
    scatter_add(g, p, w);
  }
  return finish(w);
}

RealField FcOperators::external_force(const RealField& r) const {
  require_same_shape(r.shape(), shape(), "external_force");
  Workspace w(shape());
  for (int p = 0; p < pre_.s; ++p) {
    for (std::size_t i = 0; i < r.size(); ++i) w.real[i] = pre_.c0[p][i] * r[i];
    scatter_add(w.real, p, w);
  }
  return finish(w);
}

RealField FcOperators::nonlinear_force_scalar(const RealField& n) const {
  return external_force(n);
}

RealField FcOperators::evaluate_field(const RealField& d) const {
  Workspace w(shape());
  masked_spectrum(d, w);
  RealField dp(shape());
  RealField u(shape());
  for (int p = 0; p < pre_.s; ++p) {
    convolve_weighted(p, w, dp);
    accumulate_product(pre_.chi_b0[p], dp, u);
  }
  return u;
}

RealField FcOperators::boundary_force(const RealField& q, const RealField& area) const {
  require_same_shape(q.shape(), shape(), "boundary_force");
  require_same_shape(area.shape(), shape(), "boundary_force");
  const RealField aq = hadamard(area, q);
  Workspace w(shape());
  for (int p = 0; p < pre_.s; ++p) {
    for (std::size_t i = 0; i < aq.size(); ++i) w.real[i] = pre_.chi_b0[p][i] * aq[i];
    scatter_add(w.real, p, w);
  }
  return finish(w);
}

RealField FcOperators::mass_force(const RealField& ddot) const {
  Workspace w(shape());
  masked_spectrum(ddot, w);
  RealField dp(shape());
  RealField a0(shape());
  for (int q = 0; q < pre_.s; ++q) {
    convolve_weighted(q, w, dp);
    accumulate_product(pre_.b0[q], dp, a0);
  }
  for (int p = 0; p < pre_.s; ++p) {
    for (std::size_t i = 0; i < a0.size(); ++i) w.real[i] = pre_.c0[p][i] * a0[i];
    scatter_add(w.real, p, w);
  }
  return finish(w);
}

RealField FcOperators::lumped_mass() const {
  Workspace w(shape());
  for (int p = 0; p < pre_.s; ++p) scatter_add(pre_.c0[p], p, w);
  RealField m = finish(w);
  std::size_t bad = 0;
  std::size_t first = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (pre_.chi[i] != 0.0 && !(m[i] > 0.0)) {
      if (bad++ == 0) first = i;
    }
  }
  if (bad > 0) {
    std::ostringstream os;
    os << bad << " domain nodes have non-positive lumped mass (first: node " << first
       << ", value " << m[first] << ")";
    warn(os.str());
  }
  return m;
}

std::size_t FcOperators::persistent_bytes() const {
  std::size_t spectra = 0;
  for (const auto& h : table_.weighted_hat) spectra += h.size() * sizeof(Complex);
  for (const auto& h : table_.reflected_hat) spectra += h.size() * sizeof(Complex);
  return pre_.persistent_bytes() + spectra;
}

}  // namespace fcrkpm
