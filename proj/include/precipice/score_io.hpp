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
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "precipice/errors.hpp"
#include "precipice/score_set.hpp"

namespace precipice {

enum class ScoreFormat { json, csv };

namespace detail {

inline std::string_view trim_cr(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.remove_suffix(1);
  }
  return line;
}

inline std::vector<std::string_view> split_csv_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

inline double parse_csv_double(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("csv line " + std::to_string(line_no) +
                     ": cannot parse number '" + std::string(field) + "'");
  }
  return value;
}

// Accumulates (task -> runs) per algorithm while preserving first-seen order.
struct ScoreAccumulator {
  std::vector<std::string> tasks;
  std::vector<std::vector<double>> runs;

  std::vector<double>& runs_for(const std::string& task) {
    for (std::size_t m = 0; m < tasks.size(); ++m) {
      if (tasks[m] == task) return runs[m];
    }
    tasks.push_back(task);
    runs.emplace_back();
    return runs.back();
  }
};

inline void check_unique_ids(const std::vector<ScoreSet>& sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (sets[i].algorithm_id() == sets[j].algorithm_id()) {
        throw ValidationError("duplicate algorithm id '" +
                              sets[i].algorithm_id() + "' in input");
      }
    }
  }
}

}  // namespace detail

/// Parses the JSON score schema: a single object or an array of objects,
/// each `{"alg": <string>, "scores": {<task>: [<number>, ...], ...}}`.
/// Task and algorithm order follow the file.
inline std::vector<ScoreSet> load_scores_json(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("json parse error: ") + e.what());
  }

  std::vector<nlohmann::ordered_json> entries;
  if (doc.is_array()) {
    entries.assign(doc.begin(), doc.end());
  } else {
    entries.push_back(std::move(doc));
  }

  std::vector<ScoreSet> out;
  out.reserve(entries.size());
  for (const auto& entry : entries) {
    if (!entry.is_object()) {
      throw ParseError("json: expected an object with keys 'alg' and 'scores'");
    }
    if (!entry.contains("alg") || !entry["alg"].is_string()) {
      throw ParseError("json: missing or non-string key 'alg'");
    }
    const std::string alg = entry["alg"].get<std::string>();
    if (!entry.contains("scores") || !entry["scores"].is_object()) {
      throw ParseError("json: algorithm '" + alg +
                       "' is missing object key 'scores'");
    }
    std::vector<std::string> tasks;
    std::vector<std::vector<double>> runs;
    for (const auto& [task, values] : entry["scores"].items()) {
      if (!values.is_array()) {
        throw ParseError("json: task '" + task + "' of '" + alg +
                         "' is not an array");
      }
      std::vector<double> row;
      row.reserve(values.size());
      for (const auto& v : values) {
        if (!v.is_number()) {
          throw ParseError("json: task '" + task + "' of '" + alg +
                           "' contains a non-numeric run score");
        }
        row.push_back(v.get<double>());
      }
      if (row.empty()) {
        throw ValidationError("task '" + task + "' of '" + alg +
                              "' has an empty run list");
      }
      tasks.push_back(task);
      runs.push_back(std::move(row));
    }
    out.emplace_back(alg, std::move(tasks), std::move(runs));
  }
  if (out.empty()) throw ValidationError("input contains no algorithms");
  detail::check_unique_ids(out);
  return out;
}

/// Parses the CSV score schema. Header must be `algorithm,task,run,score`;
/// run indices must be contiguous from 0 within each (algorithm, task).
inline std::vector<ScoreSet> load_scores_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("csv: empty input");
  ++line_no;
  if (detail::trim_cr(line) != "algorithm,task,run,score") {
    throw ParseError("csv line 1: expected header 'algorithm,task,run,score'");
  }

  std::vector<std::string> order;  // algorithm ids in first-seen order
  std::map<std::string, detail::ScoreAccumulator> acc;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = detail::trim_cr(line);
    if (row.empty()) continue;
    const auto fields = detail::split_csv_row(row);
    if (fields.size() != 4) {
      throw ParseError("csv line " + std::to_string(line_no) +
                       ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    }
    const std::string alg(fields[0]);
    const std::string task(fields[1]);
    std::size_t run_index = 0;
    {
      const char* first = fields[2].data();
      const char* last = fields[2].data() + fields[2].size();
      auto [ptr, ec] = std::from_chars(first, last, run_index);
      if (ec != std::errc() || ptr != last) {
        throw ParseError("csv line " + std::to_string(line_no) +
                         ": bad run index '" + std::string(fields[2]) + "'");
      }
    }
    const double score = detail::parse_csv_double(fields[3], line_no);
    if (acc.find(alg) == acc.end()) order.push_back(alg);
    auto& runs = acc[alg].runs_for(task);
    if (run_index != runs.size()) {
      throw ParseError("csv line " + std::to_string(line_no) + ": run index " +
                       std::to_string(run_index) + " for (" + alg + ", " +
                       task + ") is not contiguous from 0");
    }
    runs.push_back(score);
  }

  std::vector<ScoreSet> out;
  out.reserve(order.size());
  for (const auto& alg : order) {
    auto& a = acc[alg];
    out.emplace_back(alg, std::move(a.tasks), std::move(a.runs));
  }
  if (out.empty()) throw ValidationError("input contains no algorithms");
  return out;
}

inline std::vector<ScoreSet> load_scores_ordered(std::istream& in,
                                                 ScoreFormat format) {
  return format == ScoreFormat::json ? load_scores_json(in)
                                     : load_scores_csv(in);
}

/// Keyed view of the loaded algorithms.
inline std::map<std::string, ScoreSet> load_scores(std::istream& in,
                                                   ScoreFormat format) {
  std::map<std::string, ScoreSet> out;
  for (auto& s : load_scores_ordered(in, format)) {
    std::string id = s.algorithm_id();
    out.emplace(std::move(id), std::move(s));
  }
  return out;
}

/// Loads a score file, picking the format from the extension
/// (.csv -> csv, anything else -> json).
inline std::vector<ScoreSet> load_scores_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file '" + path.string() + "'");
  const ScoreFormat format =
      path.extension() == ".csv" ? ScoreFormat::csv : ScoreFormat::json;
  try {
    return load_scores_ordered(in, format);
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.filename().string() + ": " + e.what());
  }
}

/// NormalizationSpec schema: `{<task>: {"low": <num>, "high": <num>}, ...}`.
inline NormalizationSpec load_normalization(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("normalization json parse error: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("normalization spec must be a json object");
  }
  NormalizationSpec spec;
  for (const auto& [task, ref] : doc.items()) {
    if (!ref.is_object() || !ref.contains("low") || !ref.contains("high") ||
        !ref["low"].is_number() || !ref["high"].is_number()) {
      throw ParseError("normalization for task '" + task +
                       "' needs numeric keys 'low' and 'high'");
    }
    spec.set(task, ref["low"].get<double>(), ref["high"].get<double>());
  }
  return spec;
}

inline NormalizationSpec load_normalization_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open normalization file '" + path.string() + "'");
  }
  return load_normalization(in);
}

inline nlohmann::ordered_json score_set_to_json(const ScoreSet& s) {
  nlohmann::ordered_json scores = nlohmann::ordered_json::object();
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    scores[s.task_name(m)] = s.runs(m);
  }
  return nlohmann::ordered_json{{"alg", s.algorithm_id()}, {"scores", scores}};
}

/// Serializes one or more ScoreSets back to the JSON input schema, so that
/// load -> serialize -> load round-trips content exactly.
inline std::string scores_to_json_text(const std::vector<ScoreSet>& sets) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : sets) arr.push_back(score_set_to_json(s));
  return arr.dump(2) + "\n";
}

}  // namespace precipice
