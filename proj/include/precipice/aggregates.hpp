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

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "precipice/errors.hpp"
#include "precipice/score_set.hpp"

namespace precipice {

/// Median with the even-count convention (average of the two middle values).
inline double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return (n % 2 == 1) ? values[n / 2]
                      : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

/// Trimmed mean of an already-sorted sequence: drops
/// floor(trim_fraction * n) values from each end and averages the rest.
inline double trimmed_mean_sorted(const std::vector<double>& sorted,
                                  double trim_fraction) {
  if (sorted.empty()) throw ValidationError("trimmed mean of empty sequence");
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
    throw ValidationError("trim_fraction must lie in [0, 0.5)");
  }
  const std::size_t drop = static_cast<std::size_t>(
      trim_fraction * static_cast<double>(sorted.size()));
  const std::size_t kept = sorted.size() - 2 * drop;
  assert(kept >= 1);
  double sum = 0.0;
  for (std::size_t i = drop; i < drop + kept; ++i) sum += sorted[i];
  const double mean = sum / static_cast<double>(kept);
  // a mean lies within the kept range; clamping removes summation round-off
  // at the edges (and makes constant data return the constant exactly)
  return std::clamp(mean, sorted[drop], sorted[drop + kept - 1]);
}

/// Mean after dropping floor(trim_fraction * n) values from each end of the
/// sorted sequence. trim_fraction = 0 is the plain mean.
inline double trimmed_mean(std::vector<double> values, double trim_fraction) {
  std::sort(values.begin(), values.end());
  return trimmed_mean_sorted(values, trim_fraction);
}

inline double mean_of_task_means(const ScoreSet& s) {
  const auto means = task_means(s);
  double sum = 0.0;
  for (double m : means) sum += m;
  return sum / static_cast<double>(means.size());
}

inline double median_of_task_means(const ScoreSet& s) {
  return median(task_means(s));
}

/// Interquartile mean over the pooled runs of all tasks; the default
/// trim of 0.25 keeps the middle 50% of runs.
inline double iqm(const ScoreSet& s, double trim_fraction = 0.25) {
  return trimmed_mean(pooled_scores(s), trim_fraction);
}

/// Mean shortfall below the target score gamma: E[max(gamma - x, 0)] over
/// pooled runs. Zero when every run meets the target.
inline double optimality_gap(const ScoreSet& s, double gamma = 1.0) {
  if (!std::isfinite(gamma)) {
    throw ValidationError("optimality_gap: gamma must be finite");
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    for (double x : s.runs(m)) sum += std::max(gamma - x, 0.0);
  }
  return sum / static_cast<double>(s.total_runs());
}

/// Pointwise gap(gamma)/gamma over an ascending grid of positive thresholds.
inline std::vector<std::pair<double, double>> optimality_gap_curve(
    const ScoreSet& s, const std::vector<double>& gammas) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(gammas.size());
  double prev = -1.0;
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw ValidationError("optimality_gap_curve: thresholds must be > 0");
    }
    if (g <= prev) {
      throw ValidationError("optimality_gap_curve: grid must be ascending");
    }
    prev = g;
    curve.emplace_back(g, optimality_gap(s, g) / g);
  }
  return curve;
}

/// Mean of the ceil(fraction * K) smallest pooled runs ("difficulty
/// progress"; fraction 0.25 reads performance on the hardest quarter).
inline double difficulty_progress(const ScoreSet& s, double fraction = 0.25) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("difficulty_progress: fraction must lie in (0, 1]");
  }
  std::vector<double> pooled = pooled_scores(s);
  std::sort(pooled.begin(), pooled.end());
  const std::size_t count = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(pooled.size())));
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += pooled[i];
  return std::clamp(sum / static_cast<double>(count), pooled.front(),
                    pooled[count - 1]);
}

/// Fraction of pooled runs strictly above `threshold` (with threshold 1.0
/// and human-normalized scores: the probability of being superhuman).
inline double superhuman_probability(const ScoreSet& s,
                                     double threshold = 1.0) {
  std::size_t above = 0;
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    for (double x : s.runs(m)) above += x > threshold ? 1 : 0;
  }
  return static_cast<double>(above) / static_cast<double>(s.total_runs());
}

/// Task-averaged Mann-Whitney probability that a run of `x` beats a run of
/// `y`, ties counting one half. Tasks are matched by name and must agree
/// exactly between the two sets.
///
/// Computed as 0.5 + mean per-task deviation from one half, which makes
/// probability_of_improvement(x, y) + probability_of_improvement(y, x)
/// equal 1.0 exactly in floating point.
inline double probability_of_improvement(const ScoreSet& x,
                                         const ScoreSet& y) {
  if (x.task_count() != y.task_count()) {
    throw ValidationError("probability_of_improvement: task sets differ");
  }
  double deviation_sum = 0.0;
  for (std::size_t m = 0; m < x.task_count(); ++m) {
    const auto other = y.index_of(x.task_name(m));
    if (!other) {
      throw ValidationError("probability_of_improvement: task '" +
                            x.task_name(m) + "' missing from '" +
                            y.algorithm_id() + "'");
    }
    const auto& xs = x.runs(m);
    const auto& ys = y.runs(*other);
    double wins = 0.0;  // multiples of 0.5, exact in double
    for (double a : xs) {
      for (double b : ys) {
        if (b < a) {
          wins += 1.0;
        } else if (b == a) {
          wins += 0.5;
        }
      }
    }
    const double pairs = static_cast<double>(xs.size() * ys.size());
    deviation_sum += (wins - 0.5 * pairs) / pairs;
  }
  return 0.5 + deviation_sum / static_cast<double>(x.task_count());
}

// ---------------------------------------------------------------------------
// Named metric registry shared by the CLI and the experiment harness.

enum class MetricKind {
  mean,
  median,
  iqm,
  optimality_gap,
  difficulty_progress,
  superhuman_prob,
};

struct MetricSpec {
  MetricKind kind = MetricKind::iqm;
  double trim_fraction = 0.25;  // iqm / difficulty_progress
  double gamma = 1.0;           // optimality_gap / superhuman_prob threshold

  static MetricSpec parse(std::string_view name, double trim_fraction = 0.25,
                          double gamma = 1.0) {
    MetricSpec spec;
    spec.trim_fraction = trim_fraction;
    spec.gamma = gamma;
    if (name == "mean") {
      spec.kind = MetricKind::mean;
    } else if (name == "median") {
      spec.kind = MetricKind::median;
    } else if (name == "iqm") {
      spec.kind = MetricKind::iqm;
    } else if (name == "optimality_gap") {
      spec.kind = MetricKind::optimality_gap;
    } else if (name == "difficulty_progress") {
      spec.kind = MetricKind::difficulty_progress;
    } else if (name == "superhuman_prob") {
      spec.kind = MetricKind::superhuman_prob;
    } else {
      throw ConfigError("unknown metric '" + std::string(name) + "'");
    }
    if (!(spec.trim_fraction >= 0.0 && spec.trim_fraction < 0.5)) {
      throw ConfigError("trim_fraction must lie in [0, 0.5)");
    }
    if (!std::isfinite(spec.gamma)) {
      throw ConfigError("gamma must be finite");
    }
    return spec;
  }

  std::string name() const {
    switch (kind) {
      case MetricKind::mean: return "mean";
      case MetricKind::median: return "median";
      case MetricKind::iqm: return "iqm";
      case MetricKind::optimality_gap: return "optimality_gap";
      case MetricKind::difficulty_progress: return "difficulty_progress";
      case MetricKind::superhuman_prob: return "superhuman_prob";
    }
    return "unknown";
  }
};

inline Statistic make_statistic(const MetricSpec& spec) {
  switch (spec.kind) {
    case MetricKind::mean:
      return [](const ScoreSet& s) { return mean_of_task_means(s); };
    case MetricKind::median:
      return [](const ScoreSet& s) { return median_of_task_means(s); };
    case MetricKind::iqm:
      return [f = spec.trim_fraction](const ScoreSet& s) { return iqm(s, f); };
    case MetricKind::optimality_gap:
      return [g = spec.gamma](const ScoreSet& s) {
        return optimality_gap(s, g);
      };
    case MetricKind::difficulty_progress:
      if (spec.trim_fraction <= 0.0) {
        throw ConfigError("difficulty_progress needs trim_fraction > 0");
      }
      return [f = spec.trim_fraction](const ScoreSet& s) {
        return difficulty_progress(s, f);
      };
    case MetricKind::superhuman_prob:
      return [g = spec.gamma](const ScoreSet& s) {
        return superhuman_probability(s, g);
      };
  }
  throw ConfigError("unhandled metric kind");
}

/// Splits a comma-separated metric list like "iqm,median,mean".
inline std::vector<MetricSpec> parse_metric_list(std::string_view csv,
                                                 double trim_fraction = 0.25,
                                                 double gamma = 1.0) {
  std::vector<MetricSpec> specs;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      std::string_view item = csv.substr(start, i - start);
      while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
      while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
      if (!item.empty()) {
        specs.push_back(MetricSpec::parse(item, trim_fraction, gamma));
      }
      start = i + 1;
    }
  }
  if (specs.empty()) throw ConfigError("empty metric list");
  return specs;
}

}  // namespace precipice
