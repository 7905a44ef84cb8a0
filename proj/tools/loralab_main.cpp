// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "loralab/cli/config.hpp"
#include "loralab/cli/runner.hpp"
#include "loralab/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

int report(const char* what, const std::exception& e, int code) {
  std::cerr << "loralab: " << what << ": " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank adaptation noise-robustness experiments"};
  app.set_version_flag("--version", loralab::cli::artifact_version());
  std::string kind;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> seeds;
  std::optional<std::size_t> jobs;
  app.add_option("kind", kind, "memorize | temporal | ranksweep | ract | threshold | rankgap | mnist-ract")
      ->required();
  app.add_option("--config", config_path, "YAML experiment config")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--seeds", seeds, "comma-separated seed list (overrides the config)");
  app.add_option("--jobs", jobs, "maximum parallel jobs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const loralab::cli::Kind k = loralab::cli::parse_kind(kind);
    loralab::cli::ExperimentConfig cfg = loralab::cli::parse_config(config_path, k);
    if (seeds) cfg.seeds = loralab::cli::parse_seed_list(*seeds);
    if (jobs) cfg.jobs = *jobs;
    const std::filesystem::path out = out_dir ? std::filesystem::path(*out_dir) : cfg.output;
    const loralab::cli::RunManifest m = loralab::cli::run(cfg, out);
    for (const auto& f : m.files) std::cout << (out / f).string() << '\n';
    std::cout << (out / "manifest.json").string() << '\n';
    return 0;
  } catch (const loralab::ConfigError& e) {
    return report("config error", e, kExitConfig);
  } catch (const loralab::ArgumentError& e) {
    return report("invalid setting", e, kExitConfig);
  } catch (const loralab::DimensionError& e) {
    return report("invalid setting", e, kExitConfig);
  } catch (const loralab::IoError& e) {
    return report("i/o error", e, kExitIo);
  } catch (const loralab::FormatError& e) {
    return report("bad input file", e, kExitIo);
  } catch (const loralab::NumericError& e) {
    return report("numeric failure", e, kExitNumeric);
  } catch (const std::exception& e) {
    return report("error", e, 1);
  }
}
