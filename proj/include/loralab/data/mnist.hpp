// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>

#include "loralab/data/dataset.hpp"

namespace loralab::data {

inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;  // 2049
inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;  // 2051

/// Reads an IDX image/label pair (big-endian headers, one unsigned byte per
/// pixel or label). Pixels are scaled to [0, 1] and each image is flattened
/// row-major. With `limit`, only the first `limit` samples in file order are kept.
/// Throws FormatError on bad magic, truncation or count disagreement, IoError
/// when a file cannot be opened.
NoisyDataset load_mnist_idx(const std::filesystem::path& images_path,
                            const std::filesystem::path& labels_path,
                            std::optional<std::size_t> limit = std::nullopt);

/// Writers for the same format; used to build fixtures.
void write_idx_images(const std::filesystem::path& path, std::size_t count, std::size_t rows,
                      std::size_t cols, std::span<const std::uint8_t> pixels);
void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels);

}  // namespace loralab::data
