// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "loralab/errors.hpp"

namespace loralab::cli {

std::string format_value(const CsvValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (x.find_first_of(",\"\r\n") != std::string::npos) {
            throw ArgumentError("csv: string field contains a separator: " + x);
          }
          return x;
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(x)) return "nan";
          if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
          char buf[64];
          const auto res = std::to_chars(buf, buf + sizeof(buf), x);
          return std::string(buf, res.ptr);
        } else {
          char buf[32];
          const auto res = std::to_chars(buf, buf + sizeof(buf), x);
          return std::string(buf, res.ptr);
        }
      },
      v);
}

std::string render_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw ArgumentError("csv: row has " + std::to_string(row.size()) + " fields, header has " +
                          std::to_string(table.header.size()));
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_value(row[i]);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
  const std::string text = render_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

CsvText parse_csv(std::string_view text) {
  CsvText out;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    std::vector<std::string> fields;
    std::size_t s = 0;
    while (true) {
      const std::size_t c = line.find(',', s);
      fields.emplace_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (first) {
      out.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != out.header.size()) throw FormatError("csv: ragged row");
      out.rows.push_back(std::move(fields));
    }
  }
  if (first) throw FormatError("csv: missing header");
  return out;
}

CsvText read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("csv: not a number: " + std::string(s));
  }
  return v;
}

}  // namespace loralab::cli
