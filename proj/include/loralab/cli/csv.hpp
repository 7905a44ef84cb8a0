// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace loralab::cli {

using CsvValue = std::variant<std::int64_t, std::uint64_t, double, std::string>;
using CsvRow = std::vector<CsvValue>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

/// Reals use the shortest decimal that round-trips (std::to_chars); NaN is
/// "nan", infinities "inf" / "-inf". Strings are written verbatim and must not
/// contain commas, quotes or newlines.
std::string format_value(const CsvValue& v);

/// Header then one line per row, LF endings. Throws ArgumentError when a row
/// width differs from the header and IoError when the file cannot be written.
void emit_csv(const CsvTable& table, const std::filesystem::path& path);
std::string render_csv(const CsvTable& table);

/// Parsed back as strings; numeric columns go through parse_double.
struct CsvText {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvText read_csv(const std::filesystem::path& path);
CsvText parse_csv(std::string_view text);
double parse_double(std::string_view s);

}  // namespace loralab::cli
