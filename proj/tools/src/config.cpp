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


#include "fcrkpm_tools/config.hpp"

#include <fstream>
#include <set>

namespace fcrkpm::tools {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

double RunConfig::a_tilde_at(int axis) const {
  return a_tilde.size() == 1 ? a_tilde[0] : a_tilde.at(static_cast<std::size_t>(axis));
}

RunConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"schema_version", "experiment", "dim", "a_tilde", "degree", "mode", "n",
                  "spacing", "repetitions", "seed", "threads", "output", "solver", "converge",
                  "bench", "verify"},
                 "config");
  RunConfig c;
  read(j, "schema_version", c.schema_version, "config");
  require(c.schema_version == kSchemaVersion,
          "config.schema_version: unsupported version " + std::to_string(c.schema_version));
  read(j, "experiment", c.experiment, "config");
  read(j, "dim", c.dim, "config");
  if (j.contains("a_tilde") && j.at("a_tilde").is_number()) {
    c.a_tilde = {j.at("a_tilde").get<double>()};
  } else {
    read(j, "a_tilde", c.a_tilde, "config");
  }
  read(j, "degree", c.degree, "config");
  read(j, "mode", c.mode, "config");
  if (j.contains("n") && j.at("n").is_number()) {
    c.n = {j.at("n").get<double>()};
  } else {
    read(j, "n", c.n, "config");
  }
  read(j, "spacing", c.spacing, "config");
  read(j, "repetitions", c.repetitions, "config");
  read(j, "seed", c.seed, "config");
  read(j, "threads", c.threads, "config");
  read(j, "output", c.output, "config");

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s,
                   {"tolerance", "max_iterations", "scheme", "dt", "t_end", "diffusivity",
                    "sample_stride"},
                   "config.solver");
    read(s, "tolerance", c.solver.tolerance, "config.solver");
    read(s, "max_iterations", c.solver.max_iterations, "config.solver");
    read(s, "scheme", c.solver.scheme, "config.solver");
    read(s, "dt", c.solver.dt, "config.solver");
    read(s, "t_end", c.solver.t_end, "config.solver");
    read(s, "diffusivity", c.solver.diffusivity, "config.solver");
    read(s, "sample_stride", c.solver.sample_stride, "config.solver");
  }
  if (j.contains("converge")) {
    const json& s = j.at("converge");
    reject_unknown(s, {"sweep", "problem"}, "config.converge");
    read(s, "sweep", c.converge.sweep, "config.converge");
    read(s, "problem", c.converge.problem, "config.converge");
  }
  if (j.contains("bench")) {
    const json& s = j.at("bench");
    reject_unknown(s, {"sizes", "a_tilde", "degrees", "traditional_limit"}, "config.bench");
    read(s, "sizes", c.bench.sizes, "config.bench");
    read(s, "a_tilde", c.bench.a_tilde, "config.bench");
    read(s, "degrees", c.bench.degrees, "config.bench");
    read(s, "traditional_limit", c.bench.traditional_limit, "config.bench");
  }
  if (j.contains("verify")) {
    const json& s = j.at("verify");
    reject_unknown(s, {"fault"}, "config.verify");
    read(s, "fault", c.verify.fault, "config.verify");
  }

  const std::set<std::string> experiments{"verify", "converge", "bench", "diffuse"};
  require(experiments.count(c.experiment) == 1, "config.experiment: unknown experiment '" + c.experiment + "'");
  require(c.dim >= 1 && c.dim <= 3, "config.dim: must be 1, 2 or 3");
  require(c.a_tilde.size() == 1 || static_cast<int>(c.a_tilde.size()) == c.dim,
          "config.a_tilde: give one value or one per axis");
  for (double a : c.a_tilde) require(a >= 1.0, "config.a_tilde: values must be >= 1");
  require(c.degree >= 1 && c.degree <= 3, "config.degree: must be 1, 2 or 3");
  require(c.mode == "fix-count" || c.mode == "fix-spacing",
          "config.mode: must be 'fix-count' or 'fix-spacing'");
  if (c.mode == "fix-count") {
    require(c.n.size() == 1 || static_cast<int>(c.n.size()) == c.dim,
            "config.n: give one value or one per axis");
    for (double v : c.n) require(v >= 4 && v == static_cast<int>(v), "config.n: counts must be integers >= 4");
  } else {
    require(c.spacing.size() == 1 || static_cast<int>(c.spacing.size()) == c.dim,
            "config.spacing: give one value or one per axis");
    for (double v : c.spacing) require(v > 0.0, "config.spacing: values must be positive");
  }
  require(c.repetitions >= 3, "config.repetitions: at least 3 timed repetitions are required");
  require(c.threads >= 1, "config.threads: must be >= 1");
  require(c.solver.tolerance > 0.0, "config.solver.tolerance: must be positive");
  require(c.solver.scheme == "explicit-euler" || c.solver.scheme == "implicit-euler",
          "config.solver.scheme: must be 'explicit-euler' or 'implicit-euler'");
  require(c.solver.dt >= 0.0, "config.solver.dt: must be non-negative");
  require(c.solver.t_end > 0.0, "config.solver.t_end: must be positive");
  require(c.solver.diffusivity > 0.0, "config.solver.diffusivity: must be positive");
  for (int v : c.converge.sweep) require(v >= 4, "config.converge.sweep: counts must be >= 4");
  require(c.converge.sweep.empty() || c.converge.sweep.size() >= 3,
          "config.converge.sweep: at least 3 sizes are needed for a slope");
  require(c.converge.problem == "poisson" || c.converge.problem == "cubic-reaction",
          "config.converge.problem: must be 'poisson' or 'cubic-reaction'");
  require(c.converge.problem != "cubic-reaction" || c.dim == 1,
          "config.converge.problem: 'cubic-reaction' is one-dimensional");
  require(!c.bench.sizes.empty(), "config.bench.sizes: must not be empty");
  for (int v : c.bench.sizes) require(v >= 3, "config.bench.sizes: values must be >= 3");
  require(!c.bench.a_tilde.empty(), "config.bench.a_tilde: must not be empty");
  for (double a : c.bench.a_tilde) require(a >= 1.0, "config.bench.a_tilde: values must be >= 1");
  require(!c.bench.degrees.empty(), "config.bench.degrees: must not be empty");
  for (int v : c.bench.degrees) require(v >= 1 && v <= 3, "config.bench.degrees: must be 1, 2 or 3");
  require(c.verify.fault == "none" || c.verify.fault == "perturb-kernel",
          "config.verify.fault: must be 'none' or 'perturb-kernel'");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const RunConfig& c) {
  return json{
      {"schema_version", c.schema_version},
      {"experiment", c.experiment},
      {"dim", c.dim},
      {"a_tilde", c.a_tilde},
      {"degree", c.degree},
      {"mode", c.mode},
      {"n", c.n},
      {"spacing", c.spacing},
      {"repetitions", c.repetitions},
      {"seed", c.seed},
      {"threads", c.threads},
      {"output", c.output},
      {"solver",
       {{"tolerance", c.solver.tolerance},
        {"max_iterations", c.solver.max_iterations},
        {"scheme", c.solver.scheme},
        {"dt", c.solver.dt},
        {"t_end", c.solver.t_end},
        {"diffusivity", c.solver.diffusivity},
        {"sample_stride", c.solver.sample_stride}}},
      {"converge", {{"sweep", c.converge.sweep}, {"problem", c.converge.problem}}},
      {"bench",
       {{"sizes", c.bench.sizes},
        {"a_tilde", c.bench.a_tilde},
        {"degrees", c.bench.degrees},
        {"traditional_limit", c.bench.traditional_limit}}},
      {"verify", {{"fault", c.verify.fault}}},
  };
}

}  // namespace fcrkpm::tools
