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


// Oracle and invariant checks shared by `fcrkpm verify` and the acceptance
// runner. Each check reports the measured quantity next to its tolerance.

#ifndef FCRKPM_TOOLS_CHECKS_HPP
#define FCRKPM_TOOLS_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <fcrkpm/spectral.hpp>

namespace fcrkpm::tools {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// A fix-count box discretization of [-1, 1]^dim.
struct CaseSpec {
  int dim = 1;
  int count = 16;
  double a_tilde = 1.5;
  int degree = 1;

  std::string label() const;
};

/// 1D N=64, 2D 32^2, 3D 16^3 at a_tilde 1.5, n=1, plus 3D 16^3 at 2.5, n=2.
std::vector<CaseSpec> standard_cases();

/// max|a - b| / max|b|, or max|a - b| when b vanishes.
double relative_max_error(const std::vector<double>& a, const std::vector<double>& b);

/// Transform-based circular convolution against the direct sum over
/// `pairs` random pairs spread across 1D/2D/3D shapes.
CheckResult check_convolution_oracle(std::uint64_t seed, int pairs, FftProvider& fft);

enum class Fault { None, PerturbKernel };

/// Convolution-path moments and force terms against the direct-sum
/// reference. With PerturbKernel one weighted-kernel entry is altered
/// before the convolution path is built.
std::vector<CheckResult> check_cross_method(const CaseSpec& c, std::uint64_t seed, FftProvider& fft,
                                            Fault fault = Fault::None);

/// Partition of unity, linear reproduction and exact implicit gradients of
/// linear fields at every domain node.
std::vector<CheckResult> check_reproducing(const CaseSpec& c, FftProvider& fft);

/// Symmetry and semidefiniteness of the masked internal force over random
/// pairs, and annihilation of constants.
std::vector<CheckResult> check_operator_structure(const CaseSpec& c, std::uint64_t seed, int pairs,
                                                  FftProvider& fft);

/// Exact transform counts per operator call.
std::vector<CheckResult> check_transform_counts(const CaseSpec& c, FftProvider& fft);

/// Lumped-mass total against the quadrature volume and against direct mass
/// row sums.
std::vector<CheckResult> check_lumped_mass(const CaseSpec& c, FftProvider& fft);

/// Fully periodic box with chi = 1: constants are reproduced and
/// annihilated with no boundary truncation.
std::vector<CheckResult> check_periodic_constant(int dim, int count, FftProvider& fft);

/// Masked CG on the convolution operators against a dense LU solve of the
/// assembled reference system, 1D with N=16 and nonzero boundary data.
CheckResult check_static_direct(FftProvider& fft);

}  // namespace fcrkpm::tools

#endif  // FCRKPM_TOOLS_CHECKS_HPP
