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

// Test-only helpers: random ScoreSet generators and naive reference
// implementations of every aggregate metric. The references are written
// from the definitions with plain loops and stay independent of the
// library's computation paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "precipice/rng.hpp"
#include "precipice/score_set.hpp"

namespace testsupport {

using precipice::Philox;
using precipice::ScoreSet;

struct RandomSetOptions {
  std::size_t max_tasks = 5;
  std::size_t max_runs = 4;
  double score_low = -10.0;
  double score_high = 10.0;
  bool quantize_half = false;  // rounds to halves so ties actually occur
};

inline ScoreSet random_score_set(Philox& rng, const RandomSetOptions& opts = {},
                                 const std::string& id = "A") {
  const std::size_t tasks = 1 + rng.next_index(opts.max_tasks);
  std::vector<std::string> names;
  std::vector<std::vector<double>> runs;
  for (std::size_t m = 0; m < tasks; ++m) {
    names.push_back("t" + std::to_string(m + 1));
    const std::size_t n = 1 + rng.next_index(opts.max_runs);
    std::vector<double> row;
    for (std::size_t i = 0; i < n; ++i) {
      double x = opts.score_low +
                 (opts.score_high - opts.score_low) * rng.next_double();
      if (opts.quantize_half) x = std::round(x * 2.0) / 2.0;
      row.push_back(x);
    }
    runs.push_back(std::move(row));
  }
  return ScoreSet(id, std::move(names), std::move(runs));
}

/// Second set over the same task list (for pairwise metrics).
inline ScoreSet random_matching_set(Philox& rng, const ScoreSet& like,
                                    const RandomSetOptions& opts = {},
                                    const std::string& id = "B") {
  std::vector<std::vector<double>> runs;
  for (std::size_t m = 0; m < like.task_count(); ++m) {
    const std::size_t n = 1 + rng.next_index(opts.max_runs);
    std::vector<double> row;
    for (std::size_t i = 0; i < n; ++i) {
      double x = opts.score_low +
                 (opts.score_high - opts.score_low) * rng.next_double();
      if (opts.quantize_half) x = std::round(x * 2.0) / 2.0;
      row.push_back(x);
    }
    runs.push_back(std::move(row));
  }
  return ScoreSet(id, like.tasks(), std::move(runs));
}

// ---------------------------------------------------------------------------
// Naive references

inline std::vector<double> ref_pooled(const ScoreSet& s) {
  std::vector<double> all;
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    for (double x : s.runs(m)) all.push_back(x);
  }
  return all;
}

inline double ref_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

inline double ref_mean_of_task_means(const ScoreSet& s) {
  double sum = 0.0;
  for (std::size_t m = 0; m < s.task_count(); ++m) sum += ref_mean(s.runs(m));
  return sum / static_cast<double>(s.task_count());
}

inline double ref_median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

inline double ref_median_of_task_means(const ScoreSet& s) {
  std::vector<double> means;
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    means.push_back(ref_mean(s.runs(m)));
  }
  return ref_median(std::move(means));
}

inline double ref_trimmed_mean(std::vector<double> xs, double trim) {
  std::sort(xs.begin(), xs.end());
  const std::size_t drop =
      static_cast<std::size_t>(trim * static_cast<double>(xs.size()));
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = drop; i + drop < xs.size(); ++i) {
    sum += xs[i];
    ++count;
  }
  return sum / static_cast<double>(count);
}

inline double ref_iqm(const ScoreSet& s, double trim = 0.25) {
  return ref_trimmed_mean(ref_pooled(s), trim);
}

inline double ref_optimality_gap(const ScoreSet& s, double gamma = 1.0) {
  const auto pooled = ref_pooled(s);
  double sum = 0.0;
  for (double x : pooled) {
    if (x < gamma) sum += gamma - x;
  }
  return sum / static_cast<double>(pooled.size());
}

inline double ref_difficulty_progress(const ScoreSet& s, double fraction = 0.25) {
  auto pooled = ref_pooled(s);
  std::sort(pooled.begin(), pooled.end());
  const std::size_t count = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(pooled.size())));
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += pooled[i];
  return sum / static_cast<double>(count);
}

inline double ref_superhuman(const ScoreSet& s, double threshold = 1.0) {
  const auto pooled = ref_pooled(s);
  std::size_t above = 0;
  for (double x : pooled) {
    if (x > threshold) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(pooled.size());
}

/// Exhaustive pair enumeration of the Mann-Whitney win probability, ties
/// worth one half, combined as 0.5 + the task-averaged deviation so the
/// two directions are exact complements.
inline double ref_probability_of_improvement(const ScoreSet& x,
                                             const ScoreSet& y) {
  double dev = 0.0;
  for (std::size_t m = 0; m < x.task_count(); ++m) {
    const std::size_t my = *y.index_of(x.task_name(m));
    double wins = 0.0;
    for (double b : y.runs(my)) {
      for (double a : x.runs(m)) {
        if (a > b) wins += 1.0;
        if (a == b) wins += 0.5;
      }
    }
    const double pairs =
        static_cast<double>(x.run_count(m) * y.run_count(my));
    dev += (wins - 0.5 * pairs) / pairs;
  }
  return 0.5 + dev / static_cast<double>(x.task_count());
}

}  // namespace testsupport
