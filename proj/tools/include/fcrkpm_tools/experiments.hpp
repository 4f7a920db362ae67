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


// Experiment orchestration behind the command-line subcommands. Each
// experiment returns plain records; the writers emit the frozen CSV and
// JSON layouts.

#ifndef FCRKPM_TOOLS_EXPERIMENTS_HPP
#define FCRKPM_TOOLS_EXPERIMENTS_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include <fcrkpm/spectral.hpp>

#include "fcrkpm_tools/checks.hpp"
#include "fcrkpm_tools/config.hpp"

namespace fcrkpm::tools {

inline constexpr const char* kConvergeHeader =
    "dim,n,a_tilde,Nx,Ny,Nz,N_omega,e_l2,e_linf,cg_iters,wall_s";
inline constexpr const char* kBenchHeader =
    "term,method,n,a_tilde,N_omega,N_total,M,median_s,reps,persistent_bytes,speedup,note";
inline constexpr const char* kDiffuseHeader = "step,t,u_linf,diff_static_linf";

/// Defaults per subcommand; these mirror the standard setups (a_tilde 1.5,
/// n = 1, tolerance 1e-12).
RunConfig default_config(const std::string& experiment);

// ---- verify ---------------------------------------------------------------

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

VerifyReport run_verify(const RunConfig& config, FftProvider& fft);
nlohmann::json to_json(const VerifyReport& report);

// ---- converge -------------------------------------------------------------

struct ConvergeRow {
  int dim = 1;
  int degree = 1;
  double a_tilde = 1.5;
  std::array<int, 3> count{1, 1, 1};
  std::size_t n_omega = 0;
  double spacing = 0.0;
  /// Continuous L2 error in 1D, normalized nodal L2 otherwise.
  double e_l2 = 0.0;
  double e_linf = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
};

struct ConvergeResult {
  std::vector<ConvergeRow> rows;
  double slope_l2 = 0.0;
  double slope_linf = 0.0;
};

/// 1D: 2^3..2^9, 2D: 2^3..2^7, 3D: 2^3..2^5 box nodes per axis.
std::vector<int> default_sweep(int dim);
ConvergeResult run_convergence(const RunConfig& config, FftProvider& fft);
void write_convergence_csv(std::ostream& os, const ConvergeResult& result);

// ---- bench ----------------------------------------------------------------

struct TimingRecord {
  std::string term;
  std::string method;
  int degree = 1;
  double a_tilde = 1.5;
  std::size_t n_omega = 0;
  std::size_t n_total = 0;
  std::size_t neighbors = 0;
  /// Empty when the measurement was skipped and could not be estimated.
  std::optional<double> median_seconds;
  std::size_t reps = 0;
  std::size_t persistent_bytes = 0;
  std::optional<double> speedup;
  std::string note;
};

struct Timing {
  double median_seconds = 0.0;
  std::size_t reps = 0;
};

/// Median over `reps` samples after one warm-up call. Calls faster than
/// the batch threshold are repeated inside each sample so every sample
/// spans at least ~100 us; `reps` in the result counts the calls.
Timing time_median(const std::function<void()>& call, int reps);

std::vector<TimingRecord> run_bench(const RunConfig& config, FftProvider& fft);
void write_bench_csv(std::ostream& os, const std::vector<TimingRecord>& records);

// ---- diffuse --------------------------------------------------------------

struct DiffuseSample {
  std::size_t step = 0;
  double t = 0.0;
  double u_linf = 0.0;
  double diff_static_linf = 0.0;
};

struct DiffuseResult {
  std::vector<DiffuseSample> samples;
  double static_linf = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
};

DiffuseResult run_diffusion(const RunConfig& config, FftProvider& fft);
void write_diffusion_csv(std::ostream& os, const DiffuseResult& result);

}  // namespace fcrkpm::tools

#endif  // FCRKPM_TOOLS_EXPERIMENTS_HPP
