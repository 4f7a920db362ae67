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


// fcrkpm command-line driver.
//
//   fcrkpm verify   [--config f.json] [--out report.json]
//   fcrkpm converge [--config f.json] [--out errors.csv]
//   fcrkpm bench    [--config f.json] [--out timings.csv] [--threads k]
//   fcrkpm diffuse  [--config f.json] [--out series.csv]
//
// Exit codes: 0 success, 1 check or runtime failure, 2 configuration error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <fcrkpm/errors.hpp>
#include <fcrkpm/spectral.hpp>

#include "fcrkpm_tools/config.hpp"
#include "fcrkpm_tools/experiments.hpp"

namespace {

using namespace fcrkpm::tools;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

RunConfig resolve_config(const std::string& experiment, const std::string& path) {
  nlohmann::json merged = to_json(default_config(experiment));
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json user;
    try {
      in >> user;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!user.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
    if (user.contains("experiment") && user["experiment"] != experiment) {
      throw ConfigError("config file is for experiment " + user["experiment"].dump() +
                        ", not '" + experiment + "'");
    }
    merged.merge_patch(user);
  }
  return parse_config(merged);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw fcrkpm::Error("cannot write output file '" + out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolution-based reproducing kernel solver: verification, convergence, "
               "benchmark and diffusion experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON run configuration (schema_version 1)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Output file; stdout when omitted");
  app.add_option("--seed", seed, "Seed for random inputs");
  app.add_option("--threads", threads, "FFT threads (> 1 selects the multithreaded provider)")
      ->check(CLI::PositiveNumber);
  app.fallthrough();

  for (const char* name : {"verify", "converge", "bench", "diffuse"}) {
    app.add_subcommand(name, std::string("run the ") + name + " experiment")->fallthrough();
  }
  app.get_subcommand("verify")->description("Oracle-equivalence and invariant suite; JSON report");
  app.get_subcommand("converge")->description("Manufactured-solution refinement sweep; CSV");
  app.get_subcommand("bench")->description("Convolution vs direct-sum timings and memory; CSV");
  app.get_subcommand("diffuse")->description("Transient diffusion toward the static solution; CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string experiment = app.get_subcommands().front()->get_name();

  RunConfig config;
  try {
    config = resolve_config(experiment, config_path);
    if (seed) config.seed = *seed;
    if (threads) config.threads = *threads;
    if (!out_path.empty()) config.output = out_path;
    config = parse_config(to_json(config));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    fcrkpm::FftwProvider fft(config.threads);
    std::ostringstream text;
    int status = 0;
    if (experiment == "verify") {
      const VerifyReport report = run_verify(config, fft);
      text << to_json(report).dump(2) << '\n';
      std::size_t failed = 0;
      for (const CheckResult& r : report.checks) {
        if (r.passed) continue;
        ++failed;
        std::cerr << "FAIL " << r.name << ": measured " << r.measured << ", tolerance " << r.tolerance
                  << '\n';
      }
      std::cerr << report.checks.size() - failed << "/" << report.checks.size() << " checks passed\n";
      status = report.passed() ? 0 : kExitFailure;
    } else if (experiment == "converge") {
      write_convergence_csv(text, run_convergence(config, fft));
    } else if (experiment == "bench") {
      write_bench_csv(text, run_bench(config, fft));
    } else {
      write_diffusion_csv(text, run_diffusion(config, fft));
    }
    emit(config.output, text.str());
    return status;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
