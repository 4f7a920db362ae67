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


// Versioned JSON run configuration for the command-line driver.

#ifndef FCRKPM_TOOLS_CONFIG_HPP
#define FCRKPM_TOOLS_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fcrkpm::tools {

inline constexpr int kSchemaVersion = 1;

/// Raised for any schema violation; the driver maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverSettings {
  double tolerance = 1e-12;
  std::size_t max_iterations = 0;
  std::string scheme = "explicit-euler";
  /// 0 selects the scheme default.
  double dt = 0.0;
  double t_end = 10.0;
  double diffusivity = 1.0;
  /// 0 selects roughly 50 samples over the run.
  std::size_t sample_stride = 0;
};

struct ConvergeSettings {
  /// Box node counts per axis; empty selects the per-dimension default.
  std::vector<int> sweep;
  std::string problem = "poisson";
};

struct BenchSettings {
  /// Domain node counts per axis.
  std::vector<int> sizes{20};
  std::vector<double> a_tilde{1.5, 2.5, 3.5};
  std::vector<int> degrees{1};
  /// Traditional stiffness assembly is skipped (and extrapolated) above this
  /// many domain nodes.
  std::size_t traditional_limit = 32768;
};

struct VerifySettings {
  /// "none" or "perturb-kernel".
  std::string fault = "none";
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string experiment = "verify";
  int dim = 2;
  /// Normalized support, one entry (broadcast) or one per axis.
  std::vector<double> a_tilde{1.5};
  int degree = 1;
  std::string mode = "fix-count";
  /// Box node counts per axis (fix-count), one entry or one per axis.
  std::vector<double> n{32};
  /// Requested spacing per axis (fix-spacing).
  std::vector<double> spacing;
  int repetitions = 5;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output;
  SolverSettings solver;
  ConvergeSettings converge;
  BenchSettings bench;
  VerifySettings verify;

  double a_tilde_at(int axis) const;
};

/// Validates and converts; unknown keys anywhere are rejected.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace fcrkpm::tools

#endif  // FCRKPM_TOOLS_CONFIG_HPP
