// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/data/mnist.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "loralab/errors.hpp"

namespace loralab::data {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (bytes.size() < offset + 4) {
    throw FormatError(path.string() + ": truncated header (" + std::to_string(bytes.size()) +
                      " bytes)");
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string hex(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex;
  os.width(8);
  os.fill('0');
  os << v;
  return os.str();
}

void check_magic(std::uint32_t actual, std::uint32_t expected, const std::filesystem::path& path) {
  if (actual != expected) {
    throw FormatError(path.string() + ": bad magic, expected " + hex(expected) + " got " +
                      hex(actual));
  }
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), b.size());
}

}  // namespace

NoisyDataset load_mnist_idx(const std::filesystem::path& images_path,
                            const std::filesystem::path& labels_path,
                            std::optional<std::size_t> limit) {
  const auto image_bytes = read_file(images_path);
  const auto label_bytes = read_file(labels_path);

  check_magic(read_be32(image_bytes, 0, images_path), kIdxImageMagic, images_path);
  check_magic(read_be32(label_bytes, 0, labels_path), kIdxLabelMagic, labels_path);

  const std::size_t image_count = read_be32(image_bytes, 4, images_path);
  const std::size_t rows = read_be32(image_bytes, 8, images_path);
  const std::size_t cols = read_be32(image_bytes, 12, images_path);
  const std::size_t label_count = read_be32(label_bytes, 4, labels_path);

  if (image_count != label_count) {
    throw FormatError("image/label count mismatch: " + std::to_string(image_count) + " images vs " +
                      std::to_string(label_count) + " labels");
  }
  const std::size_t pixels = rows * cols;
  if (pixels == 0 || image_count == 0) throw FormatError(images_path.string() + ": empty image set");
  if (image_bytes.size() < 16 + image_count * pixels) {
    throw FormatError(images_path.string() + ": truncated, expected " +
                      std::to_string(16 + image_count * pixels) + " bytes, found " +
                      std::to_string(image_bytes.size()));
  }
  if (label_bytes.size() < 8 + label_count) {
    throw FormatError(labels_path.string() + ": truncated, expected " +
                      std::to_string(8 + label_count) + " bytes, found " +
                      std::to_string(label_bytes.size()));
  }

  const std::size_t n = limit ? std::min(*limit, image_count) : image_count;
  if (n == 0) throw ArgumentError("load_mnist_idx: limit must be positive");

  NoisyDataset ds;
  ds.x = numerics::Matrix(n, pixels);
  ds.clean.resize(n);
  std::size_t max_label = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* src = image_bytes.data() + 16 + i * pixels;
    auto row = ds.x.row(i);
    for (std::size_t p = 0; p < pixels; ++p) row[p] = static_cast<double>(src[p]) / 255.0;
    ds.clean[i] = label_bytes[8 + i];
    max_label = std::max(max_label, ds.clean[i]);
  }
  ds.observed = ds.clean;
  ds.noise_mask.assign(n, false);
  ds.num_classes = std::max<std::size_t>(10, max_label + 1);
  return ds;
}

void write_idx_images(const std::filesystem::path& path, std::size_t count, std::size_t rows,
                      std::size_t cols, std::span<const std::uint8_t> pixels) {
  if (pixels.size() != count * rows * cols) throw ArgumentError("write_idx_images: pixel count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  put_be32(out, kIdxImageMagic);
  put_be32(out, static_cast<std::uint32_t>(count));
  put_be32(out, static_cast<std::uint32_t>(rows));
  put_be32(out, static_cast<std::uint32_t>(cols));
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  put_be32(out, kIdxLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

}  // namespace loralab::data
