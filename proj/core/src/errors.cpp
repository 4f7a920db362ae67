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

#include "fcrkpm/errors.hpp"

#include <iostream>
#include <mutex>
#include <sstream>

namespace fcrkpm {

namespace {

std::string describe_residue(double max_imag, double max_real) {
  std::ostringstream os;
  os << "inverse transform left an imaginary residue of " << max_imag
     << " (max real part " << max_real << ")";
  return os.str();
}

std::string describe_singular(std::size_t node, const std::array<double, 3>& x) {
  std::ostringstream os;
  os << "singular moment matrix at node " << node << " (" << x[0] << ", " << x[1]
     << ", " << x[2] << "): too few neighbors inside the kernel support";
  return os.str();
}

std::string describe_mass(std::size_t node, double value) {
  std::ostringstream os;
  os << "lumped mass " << value << " at node " << node << " is not positive";
  return os.str();
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink() {
  static WarningSink s = [](const std::string& msg) { std::clog << "warning: " << msg << '\n'; };
  return s;
}

}  // namespace

ImaginaryResidue::ImaginaryResidue(double imag, double real)
    : Error(describe_residue(imag, real)), max_imag(imag), max_real(real) {}

SingularMoment::SingularMoment(std::size_t n, std::array<double, 3> x)
    : Error(describe_singular(n, x)), node(n), coordinates(x) {}

NonPositiveLumpedMass::NonPositiveLumpedMass(std::size_t n, double v)
    : Error(describe_mass(n, v)), node(n), value(v) {}

NonFiniteState::NonFiniteState(std::size_t s)
    : Error("non-finite coefficient detected at time step " + std::to_string(s)), step(s) {}

void set_warning_sink(WarningSink s) {
  std::lock_guard lock(sink_mutex());
  sink() = s ? std::move(s) : [](const std::string&) {};
}

void warn(const std::string& message) {
  std::lock_guard lock(sink_mutex());
  sink()(message);
}

}  // namespace fcrkpm
