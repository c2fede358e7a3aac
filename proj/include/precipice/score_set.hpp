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

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "precipice/errors.hpp"

namespace precipice {

/// One algorithm's scores over a benchmark suite: M named tasks, task m
/// holding N_m >= 1 run scores. Immutable after construction, so a single
/// instance can be shared freely across threads. Task order is the order
/// given at construction and is never changed by any operation.
class ScoreSet {
 public:
  ScoreSet(std::string algorithm_id, std::vector<std::string> tasks,
           std::vector<std::vector<double>> runs)
      : algorithm_id_(std::move(algorithm_id)),
        tasks_(std::move(tasks)),
        runs_(std::move(runs)) {
    if (tasks_.empty()) {
      throw ValidationError("ScoreSet '" + algorithm_id_ +
                            "': at least one task is required");
    }
    if (tasks_.size() != runs_.size()) {
      throw ValidationError("ScoreSet '" + algorithm_id_ +
                            "': task and run-list counts differ");
    }
    std::unordered_set<std::string_view> seen;
    for (std::size_t m = 0; m < tasks_.size(); ++m) {
      if (!seen.insert(tasks_[m]).second) {
        throw ValidationError("ScoreSet '" + algorithm_id_ +
                              "': duplicate task name '" + tasks_[m] + "'");
      }
      if (runs_[m].empty()) {
        throw ValidationError("ScoreSet '" + algorithm_id_ + "': task '" +
                              tasks_[m] + "' has no runs");
      }
      for (double x : runs_[m]) {
        if (!std::isfinite(x)) {
          throw ValidationError("ScoreSet '" + algorithm_id_ + "': task '" +
                                tasks_[m] + "' contains a non-finite score");
        }
      }
      total_runs_ += runs_[m].size();
      equal_run_counts_ = equal_run_counts_ && runs_[m].size() == runs_[0].size();
    }
  }

  const std::string& algorithm_id() const noexcept { return algorithm_id_; }
  std::size_t task_count() const noexcept { return tasks_.size(); }
  const std::vector<std::string>& tasks() const noexcept { return tasks_; }
  const std::string& task_name(std::size_t m) const { return tasks_.at(m); }
  const std::vector<double>& runs(std::size_t m) const { return runs_.at(m); }
  const std::vector<std::vector<double>>& all_runs() const noexcept {
    return runs_;
  }
  std::size_t run_count(std::size_t m) const { return runs_.at(m).size(); }
  /// Total number of runs across tasks (sum of N_m).
  std::size_t total_runs() const noexcept { return total_runs_; }
  bool equal_run_counts() const noexcept { return equal_run_counts_; }
  std::size_t min_run_count() const noexcept {
    std::size_t n = runs_[0].size();
    for (const auto& r : runs_) n = std::min(n, r.size());
    return n;
  }

  std::optional<std::size_t> index_of(std::string_view task) const noexcept {
    for (std::size_t m = 0; m < tasks_.size(); ++m) {
      if (tasks_[m] == task) return m;
    }
    return std::nullopt;
  }

 private:
  std::string algorithm_id_;
  std::vector<std::string> tasks_;
  std::vector<std::vector<double>> runs_;
  std::size_t total_runs_ = 0;
  bool equal_run_counts_ = true;
};

/// Any scalar summary of a ScoreSet; the unit the bootstrap and the
/// Monte Carlo harness operate on.
using Statistic = std::function<double(const ScoreSet&)>;

/// Per-task (low, high) reference points: low maps to 0, high to 1.
class NormalizationSpec {
 public:
  void set(const std::string& task, double low, double high) {
    if (!std::isfinite(low) || !std::isfinite(high)) {
      throw ValidationError("normalization for task '" + task +
                            "' has non-finite reference points");
    }
    if (low == high) {
      throw ValidationError("normalization for task '" + task +
                            "' has equal reference points (low == high)");
    }
    points_[task] = {low, high};
  }

  struct ReferencePoints {
    double low;
    double high;
  };

  const ReferencePoints* find(const std::string& task) const noexcept {
    auto it = points_.find(task);
    return it == points_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return points_.size(); }
  const std::map<std::string, ReferencePoints>& entries() const noexcept {
    return points_;
  }

 private:
  std::map<std::string, ReferencePoints> points_;
};

/// Linearly rescales every score: x -> (x - low_m) / (high_m - low_m).
/// The spec must cover every task present in `raw`.
inline ScoreSet normalize(const ScoreSet& raw, const NormalizationSpec& spec) {
  std::vector<std::vector<double>> rescaled;
  rescaled.reserve(raw.task_count());
  for (std::size_t m = 0; m < raw.task_count(); ++m) {
    const auto* ref = spec.find(raw.task_name(m));
    if (ref == nullptr) {
      throw ValidationError("normalization spec is missing task '" +
                            raw.task_name(m) + "'");
    }
    const double span = ref->high - ref->low;
    std::vector<double> row;
    row.reserve(raw.run_count(m));
    for (double x : raw.runs(m)) row.push_back((x - ref->low) / span);
    rescaled.push_back(std::move(row));
  }
  return ScoreSet(raw.algorithm_id(), raw.tasks(), std::move(rescaled));
}

/// Same scores under a different algorithm id.
inline ScoreSet rename_algorithm(const ScoreSet& s, std::string new_id) {
  return ScoreSet(std::move(new_id), s.tasks(), s.all_runs());
}

/// Every score multiplied by `factor` (used to inject artificial lifts).
inline ScoreSet scale_scores(const ScoreSet& s, double factor) {
  std::vector<std::vector<double>> scaled = s.all_runs();
  for (auto& row : scaled) {
    for (double& x : row) x *= factor;
  }
  return ScoreSet(s.algorithm_id(), s.tasks(), std::move(scaled));
}

/// Concatenates all runs in task order, run order preserved.
inline std::vector<double> pooled_scores(const ScoreSet& s) {
  std::vector<double> pooled;
  pooled.reserve(s.total_runs());
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    const auto& r = s.runs(m);
    pooled.insert(pooled.end(), r.begin(), r.end());
  }
  return pooled;
}

/// Per-task arithmetic means (the x-bar_m of the formalism).
inline std::vector<double> task_means(const ScoreSet& s) {
  std::vector<double> means;
  means.reserve(s.task_count());
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    double sum = 0.0;
    for (double x : s.runs(m)) sum += x;
    means.push_back(sum / static_cast<double>(s.run_count(m)));
  }
  return means;
}

}  // namespace precipice
