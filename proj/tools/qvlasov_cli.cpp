// Copyright 2026 The qvlasov Authors
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

// Command-line driver.
//
//   qvlasov run <config> [--out DIR] [--seed N]
//   qvlasov report <run-dir>
//
// Exit codes: 0 success, 1 usage or configuration error, 2 physics failure.

#include "CLI11.hpp"

#include "qvlasov/experiment.hpp"

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kUsageError = 1;
constexpr int kPhysicsError = 2;

int run_command(const std::string& config_path, const std::optional<std::string>& out_dir,
                const std::optional<std::uint64_t>& seed) {
  qvlasov::ExperimentConfig cfg;
  try {
    cfg = qvlasov::parse_config(qvlasov::io::read_file(config_path));
    if (out_dir) cfg.output_dir = *out_dir;
    if (seed) cfg.rng_seed = *seed;
    qvlasov::validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  }

  qvlasov::ArtifactBundle bundle;
  int status = 0;
  std::string label;
  std::string message;
  try {
    qvlasov::run_experiment(cfg, bundle);
  } catch (const qvlasov::PhysicsError& e) {
    status = kPhysicsError, label = "physics", message = e.what();
  } catch (const qvlasov::PostselectionError& e) {
    status = kPhysicsError, label = "postselection", message = e.what();
  } catch (const qvlasov::ConfigError& e) {
    status = kUsageError, label = "config", message = e.what();
  } catch (const std::exception& e) {
    status = kUsageError, label = "error", message = e.what();
  }
  if (status != 0) bundle.put("error.txt", label + ": " + message + "\n");

  try {
    bundle.flush(cfg.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "cannot write artifacts: " << e.what() << "\n";
    return kUsageError;
  }
  if (status != 0) {
    std::cerr << label << ": " << message << "\n(partial artifacts in " << cfg.output_dir << ")\n";
    return status;
  }
  std::cout << cfg.experiment << ": wrote " << bundle.files().size() << " artifacts to "
            << cfg.output_dir << "\n";
  return 0;
}

int report_command(const std::string& run_dir) {
  try {
    const auto report = qvlasov::report_run_directory(run_dir);
    const auto text = qvlasov::dump(report);
    qvlasov::io::write_file((std::filesystem::path(run_dir) / "complexity.json").string(), text);
    std::cout << text;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum reservoir-method Vlasov-Poisson simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment and write its artifact bundle");
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  auto* seed_opt = run->add_option("--seed", seed, "RNG seed (overrides rng_seed)");

  auto* report = app.add_subcommand("report", "Recompute complexity.json for a finished run");
  std::string run_dir;
  report->add_option("run-dir", run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (*run) {
    return run_command(config_path, *out_opt ? std::optional<std::string>(out_dir) : std::nullopt,
                       *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt);
  }
  return report_command(run_dir);
}
