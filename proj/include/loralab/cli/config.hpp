// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loralab/data/task.hpp"
#include "loralab/model/trainer.hpp"
#include "loralab/ract/ract.hpp"

namespace loralab::cli {

enum class Kind { kMemorize, kTemporal, kRanksweep, kRact, kThreshold, kRankgap, kMnistRact };

std::string_view kind_name(Kind kind) noexcept;
/// Throws ConfigError on an unknown name.
Kind parse_kind(std::string_view name);

struct ExperimentConfig {
  Kind kind = Kind::kRact;
  std::vector<std::uint64_t> seeds{42, 123, 456};
  std::filesystem::path output = "results";
  std::size_t jobs = 1;

  data::TaskSpec task;
  model::TrainConfig train;  // sweeps and RACT phase 1
  double lora_alpha = 16.0;
  double dropout = 0.0;

  // memorize / ranksweep
  std::vector<std::size_t> ranks{2, 4, 8, 16, 32};
  std::vector<double> noise_rates;

  // temporal
  std::size_t temporal_rank = 16;
  std::size_t reference_rank = 2;

  // ract / threshold / rankgap / mnist-ract / temporal threshold rule
  ract::RactConfig ract;

  std::vector<double> taus{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{2, 4}, {2, 8},  {2, 16}, {4, 8}, {4, 16},
                                                         {4, 32}, {8, 16}, {8, 32}, {16, 32}};

  std::string source;  // the config text as read
};

/// Strict YAML parsing: unknown keys, wrong types and out-of-range values raise
/// ConfigError with the line and key. `kind` may come from the file or from
/// `cli_kind`; when both are present they must agree.
ExperimentConfig parse_config_text(std::string_view text, std::optional<Kind> cli_kind = std::nullopt);

/// Throws IoError when the file cannot be read.
ExperimentConfig parse_config(const std::filesystem::path& path, std::optional<Kind> cli_kind = std::nullopt);

/// Comma-separated seed list as accepted by --seeds.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace loralab::cli
