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

#ifndef FCRKPM_ERRORS_HPP
#define FCRKPM_ERRORS_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace fcrkpm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// The inverse transform produced a spectrum that was not real-symmetric.
class ImaginaryResidue : public Error {
 public:
  ImaginaryResidue(double max_imag, double max_real);
  double max_imag;
  double max_real;
};

/// A moment matrix with too few effective neighbors to be inverted.
class SingularMoment : public Error {
 public:
  SingularMoment(std::size_t node, std::array<double, 3> coordinates);
  std::size_t node;
  std::array<double, 3> coordinates;
};

class NonPositiveLumpedMass : public Error {
 public:
  NonPositiveLumpedMass(std::size_t node, double value);
  std::size_t node;
  double value;
};

/// Transient stepping produced a non-finite state.
class NonFiniteState : public Error {
 public:
  explicit NonFiniteState(std::size_t step);
  std::size_t step;
};

// Warnings are routed through a replaceable sink; the default writes to
// std::clog.
using WarningSink = std::function<void(const std::string&)>;

void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace fcrkpm

#endif  // FCRKPM_ERRORS_HPP
