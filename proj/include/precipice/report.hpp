// Copyright 2026 The Precipice Authors
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

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "precipice/bootstrap.hpp"
#include "precipice/errors.hpp"
#include "precipice/experiment.hpp"

namespace precipice {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolName = "precipice";
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal form of a double. Every number emitted to
/// CSV and embedded in SVG data attributes goes through this one function,
/// which is what makes those artifacts byte-comparable.
inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

/// FNV-1a over a byte string; cheap content digest for input provenance.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

inline std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return fnv1a64_hex(bytes);
}

inline void write_text_file(const std::filesystem::path& path,
                            std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file '" + path.string() + "'");
  out << text;
}

/// Filesystem-safe version of an algorithm id for per-algorithm artifacts.
inline std::string sanitize_filename(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out.push_back(keep ? c : '_');
  }
  return out.empty() ? "unnamed" : out;
}

inline nlohmann::ordered_json interval_to_json(const IntervalEstimate& est) {
  return nlohmann::ordered_json{
      {"point", est.point},
      {"lower", est.lower},
      {"upper", est.upper},
      {"method", ci_method_name(est.method)},
      {"nominal_coverage", est.nominal_coverage},
      {"replicates", est.replicates},
      {"seed", est.seed},
  };
}

/// Skeleton every report shares: schema version, tool identity, command
/// name and input digests, so a report alone identifies what produced it.
inline nlohmann::ordered_json report_header(
    const std::string& command,
    const std::vector<std::filesystem::path>& inputs) {
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& p : inputs) {
    files.push_back({{"file", p.filename().string()}, {"digest", file_digest(p)}});
  }
  return nlohmann::ordered_json{
      {"schema_version", kReportSchemaVersion},
      {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
      {"command", command},
      {"inputs", files},
  };
}

// ---------------------------------------------------------------------------
// CSV emission

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i > 0) text_ += ',';
      text_ += columns[i];
    }
    text_ += '\n';
    width_ = columns.size();
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  const std::string& text() const noexcept { return text_; }
  std::size_t width() const noexcept { return width_; }

 private:
  std::string text_;
  std::size_t width_ = 0;
};

inline std::string experiment_table_csv(const ExperimentTable& table) {
  CsvWriter csv(table.columns);
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) cells.push_back(format_double(v));
    csv.row(cells);
  }
  return csv.text();
}

inline nlohmann::ordered_json experiment_report_json(
    const ExperimentReport& report) {
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const auto& table : report.tables) {
    tables[table.name] = {{"columns", table.columns}, {"rows", table.rows}};
  }
  nlohmann::ordered_json doc{
      {"schema_version", kReportSchemaVersion},
      {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
      {"command", "validate"},
      {"kind", report.kind},
      {"params", report.params},
      {"summary", report.summary},
      {"tables", tables},
  };
  return doc;
}

}  // namespace precipice
