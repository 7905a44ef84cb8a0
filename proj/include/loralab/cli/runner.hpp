// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "loralab/cli/config.hpp"
#include "loralab/cli/csv.hpp"

namespace loralab::cli {

inline constexpr const char* kSummaryHeader = "key,metric,mean,std,n";

struct RunManifest {
  std::string kind;
  std::string version;
  std::string config;  // echo of the config text
  std::vector<std::uint64_t> seeds;
  double duration_seconds = 0.0;
  std::vector<std::filesystem::path> files;  // relative to the output directory
};

/// Result tables of one experiment before they are written.
struct RunTables {
  std::vector<std::pair<std::string, CsvTable>> files;  // file name, table
};

/// Executes the experiment and returns its tables; no files are touched.
/// Library errors are rethrown with the experiment kind prepended.
RunTables compute(const ExperimentConfig& cfg);

/// compute() plus the per-kind CSV, summary.csv and manifest.json in `out_dir`.
RunManifest run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

std::string artifact_version();

}  // namespace loralab::cli
