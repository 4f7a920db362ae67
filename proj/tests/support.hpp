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


#ifndef FCRKPM_TESTS_SUPPORT_HPP
#define FCRKPM_TESTS_SUPPORT_HPP

#include <memory>
#include <string>
#include <vector>

#include <fcrkpm/discretization.hpp>
#include <fcrkpm/errors.hpp>

namespace fcrkpm::test {

/// Fix-count discretization of [-1, 1]^dim.
inline std::unique_ptr<Discretization> box(int dim, int count, double a_tilde = 1.5, int degree = 1,
                                           FftProvider* fft = nullptr) {
  DiscretizationOptions o;
  o.dim = dim;
  o.degree = degree;
  o.a_tilde = {a_tilde, a_tilde, a_tilde};
  const double n = count;
  o.request = {n, n, n};
  o.fft = fft;
  return std::make_unique<Discretization>(o);
}

/// Collects library warnings while alive; warnings are dropped otherwise.
class WarningCapture {
 public:
  WarningCapture() {
    set_warning_sink([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { set_warning_sink([](const std::string&) {}); }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  bool contains(const std::string& needle) const {
    for (const auto& m : messages) {
      if (m.find(needle) != std::string::npos) return true;
    }
    return false;
  }

  std::vector<std::string> messages;
};

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace fcrkpm::test

#endif  // FCRKPM_TESTS_SUPPORT_HPP
