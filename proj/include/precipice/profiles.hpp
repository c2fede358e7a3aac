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
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "precipice/bootstrap.hpp"
#include "precipice/errors.hpp"
#include "precipice/rng.hpp"
#include "precipice/score_set.hpp"

namespace precipice {

enum class ProfileKind { run_scores, task_means };

/// A performance profile: tail fractions over an ascending threshold grid,
/// optionally with pointwise confidence bands.
struct ProfileCurve {
  std::vector<double> taus;    // strictly ascending
  std::vector<double> values;  // non-increasing, in [0, 1]
  std::optional<std::vector<double>> lower;
  std::optional<std::vector<double>> upper;
  ProfileKind kind = ProfileKind::run_scores;

  bool has_bands() const noexcept { return lower.has_value(); }

  void validate() const {
    if (taus.empty()) throw ValidationError("profile grid is empty");
    if (taus.size() != values.size()) {
      throw ValidationError("profile grid and value counts differ");
    }
    for (std::size_t i = 0; i < taus.size(); ++i) {
      if (i > 0 && !(taus[i] > taus[i - 1])) {
        throw ValidationError("profile grid must be strictly ascending");
      }
      if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
        throw ValidationError("profile values must lie in [0, 1]");
      }
      if (i > 0 && values[i] > values[i - 1]) {
        throw ValidationError("profile values must be non-increasing");
      }
      if (lower && !((*lower)[i] <= values[i] && values[i] <= (*upper)[i])) {
        throw ValidationError("profile bands must bracket the point value");
      }
    }
  }
};

/// Fraction of samples strictly greater than tau.
inline double empirical_tail(std::span<const double> samples, double tau) {
  if (samples.empty()) throw ValidationError("empirical_tail of empty sample");
  std::size_t above = 0;
  for (double x : samples) above += x > tau ? 1 : 0;
  return static_cast<double>(above) / static_cast<double>(samples.size());
}

namespace detail {

inline void check_grid(const std::vector<double>& taus) {
  if (taus.empty()) throw ValidationError("threshold grid is empty");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] > taus[i - 1])) {
      throw ValidationError("threshold grid must be strictly ascending");
    }
  }
}

// Counts of elements strictly above each grid point, one ascending sweep.
inline std::vector<std::size_t> tail_counts(std::vector<double> sorted_values,
                                            const std::vector<double>& taus) {
  std::sort(sorted_values.begin(), sorted_values.end());
  std::vector<std::size_t> counts;
  counts.reserve(taus.size());
  std::size_t p = 0;
  for (double tau : taus) {
    while (p < sorted_values.size() && sorted_values[p] <= tau) ++p;
    counts.push_back(sorted_values.size() - p);
  }
  return counts;
}

}  // namespace detail

/// Run-score distribution: the task-balanced mean of per-task empirical
/// tails, evaluated on a shared grid. With equal run counts this equals
/// the pooled empirical tail exactly, and that path is computed with a
/// single division so the identity holds bit for bit.
inline ProfileCurve run_score_distribution(const ScoreSet& s,
                                           std::vector<double> taus) {
  detail::check_grid(taus);
  const std::size_t grid = taus.size();
  ProfileCurve curve;
  curve.kind = ProfileKind::run_scores;
  curve.values.assign(grid, 0.0);

  if (s.equal_run_counts()) {
    std::vector<std::size_t> totals(grid, 0);
    for (std::size_t m = 0; m < s.task_count(); ++m) {
      const auto counts = detail::tail_counts(s.runs(m), taus);
      for (std::size_t i = 0; i < grid; ++i) totals[i] += counts[i];
    }
    const double denom = static_cast<double>(s.total_runs());
    for (std::size_t i = 0; i < grid; ++i) {
      curve.values[i] = static_cast<double>(totals[i]) / denom;
    }
  } else {
    for (std::size_t m = 0; m < s.task_count(); ++m) {
      const auto counts = detail::tail_counts(s.runs(m), taus);
      const double n = static_cast<double>(s.run_count(m));
      for (std::size_t i = 0; i < grid; ++i) {
        curve.values[i] += static_cast<double>(counts[i]) / n;
      }
    }
    const double m_count = static_cast<double>(s.task_count());
    for (double& v : curve.values) v /= m_count;
  }
  curve.taus = std::move(taus);
  return curve;
}

/// Average-score distribution: empirical tail over the M task means;
/// a step function in 1/M increments.
inline ProfileCurve average_score_distribution(const ScoreSet& s,
                                               std::vector<double> taus) {
  detail::check_grid(taus);
  const auto counts = detail::tail_counts(task_means(s), taus);
  ProfileCurve curve;
  curve.kind = ProfileKind::task_means;
  curve.values.reserve(taus.size());
  const double m_count = static_cast<double>(s.task_count());
  for (std::size_t c : counts) {
    curve.values.push_back(static_cast<double>(c) / m_count);
  }
  curve.taus = std::move(taus);
  return curve;
}

/// Default threshold grid for one or more algorithms: every distinct pooled
/// score (so each jump is captured exactly), extended by one point below
/// the minimum and one above the maximum.
inline std::vector<double> default_tau_grid(
    const std::vector<const ScoreSet*>& sets) {
  if (sets.empty()) throw ValidationError("default_tau_grid: no score sets");
  std::vector<double> taus;
  for (const ScoreSet* s : sets) {
    for (std::size_t m = 0; m < s->task_count(); ++m) {
      const auto& r = s->runs(m);
      taus.insert(taus.end(), r.begin(), r.end());
    }
  }
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  const double range = taus.back() - taus.front();
  const double pad = range > 0.0 ? 0.05 * range : 1.0;
  taus.insert(taus.begin(), taus.front() - pad);
  taus.push_back(taus.back() + pad);
  return taus;
}

/// Profile with pointwise percentile-bootstrap confidence bands under
/// runs-within-tasks resampling. Replicate b uses substream (seed, b).
inline ProfileCurve profile_with_bands(const ScoreSet& s,
                                       std::vector<double> taus,
                                       double nominal_coverage = 0.95,
                                       std::size_t replicates = 2000,
                                       std::uint64_t seed = 0,
                                       ProfileKind kind = ProfileKind::run_scores,
                                       unsigned threads = 1) {
  detail::check_grid(taus);
  if (replicates < 10) {
    throw ValidationError("profile bands need >= 10 replicates");
  }
  if (!(nominal_coverage > 0.0 && nominal_coverage < 1.0)) {
    throw ValidationError("nominal_coverage must lie in (0, 1)");
  }
  ProfileCurve curve = kind == ProfileKind::run_scores
                           ? run_score_distribution(s, taus)
                           : average_score_distribution(s, taus);

  const std::size_t grid = curve.taus.size();
  std::vector<double> replicate_values(replicates * grid);
  const ResampleStrategy strategy{ResampleKind::runs_within_tasks, std::nullopt};
  detail::parallel_for_index(replicates, threads, [&](std::size_t b) {
    Philox rng(seed, b);
    const ScoreSet draw = stratified_resample(s, strategy, rng);
    const ProfileCurve c = kind == ProfileKind::run_scores
                               ? run_score_distribution(draw, curve.taus)
                               : average_score_distribution(draw, curve.taus);
    std::copy(c.values.begin(), c.values.end(),
              replicate_values.begin() + static_cast<std::ptrdiff_t>(b * grid));
  });

  const double alpha = (1.0 - nominal_coverage) / 2.0;
  std::vector<double> lower(grid), upper(grid);
  std::vector<double> column(replicates);
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t b = 0; b < replicates; ++b) {
      column[b] = replicate_values[b * grid + i];
    }
    std::sort(column.begin(), column.end());
    lower[i] = std::min(quantile_sorted(column, alpha), curve.values[i]);
    upper[i] = std::max(quantile_sorted(column, 1.0 - alpha), curve.values[i]);
  }
  curve.lower = std::move(lower);
  curve.upper = std::move(upper);
  return curve;
}

/// Plug-in variances of the two profile estimators at one threshold:
/// sigma_runs^2 for the run-score distribution and sigma_means^2 for the
/// average-score distribution. The task-mean tail probability has no
/// closed empirical form, so it is estimated from `mean_resamples`
/// within-task bootstrap means.
inline std::pair<double, double> profile_variance(
    const ScoreSet& s, double tau, std::size_t mean_resamples = 500,
    std::uint64_t seed = 0) {
  const double m_count = static_cast<double>(s.task_count());
  double runs_var = 0.0;
  double means_var = 0.0;
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    const double f = empirical_tail(s.runs(m), tau);
    runs_var += f * (1.0 - f) / static_cast<double>(s.run_count(m));

    Philox rng(seed, m);
    const auto& r = s.runs(m);
    std::size_t above = 0;
    for (std::size_t b = 0; b < mean_resamples; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        sum += r[rng.next_index(r.size())];
      }
      above += sum / static_cast<double>(r.size()) > tau ? 1 : 0;
    }
    const double p =
        static_cast<double>(above) / static_cast<double>(mean_resamples);
    means_var += p * (1.0 - p);
  }
  return {runs_var / (m_count * m_count), means_var / (m_count * m_count)};
}

/// Exact integral of the right-continuous step interpolation of `curve`
/// from `lower_limit` to the largest grid point. Below the grid the tail
/// is taken as 1, so on a jump-complete grid over non-negative scores the
/// area equals the pooled mean.
inline double profile_area(const ProfileCurve& curve, double lower_limit = 0.0) {
  detail::check_grid(curve.taus);
  double area = 0.0;
  if (lower_limit < curve.taus.front()) {
    area += curve.taus.front() - lower_limit;
  }
  for (std::size_t i = 0; i + 1 < curve.taus.size(); ++i) {
    const double a = std::max(curve.taus[i], lower_limit);
    const double b = curve.taus[i + 1];
    if (b > a) area += curve.values[i] * (b - a);
  }
  return area;
}

/// Non-linear axis rescaling: positions each tau proportionally to the
/// fraction of runs (averaged over the given profiles) lying below it,
/// normalized to [0, 1] across the grid. Falls back to a linear map when
/// every profile is flat over the grid.
inline std::vector<double> rescaled_tau_axis(
    const std::vector<ProfileCurve>& profiles) {
  if (profiles.empty()) {
    throw ValidationError("rescaled_tau_axis: no profiles given");
  }
  const auto& taus = profiles.front().taus;
  for (const auto& p : profiles) {
    if (p.taus != taus) {
      throw ValidationError("rescaled_tau_axis: profiles use different grids");
    }
  }
  const std::size_t grid = taus.size();
  if (grid == 1) return {0.0};
  std::vector<double> raw(grid, 0.0);
  for (std::size_t i = 0; i < grid; ++i) {
    double mean_value = 0.0;
    for (const auto& p : profiles) mean_value += p.values[i];
    raw[i] = 1.0 - mean_value / static_cast<double>(profiles.size());
  }
  const double span = raw.back() - raw.front();
  std::vector<double> coords(grid);
  if (span > 0.0) {
    for (std::size_t i = 0; i < grid; ++i) {
      coords[i] = std::clamp((raw[i] - raw.front()) / span, 0.0, 1.0);
    }
  } else {
    const double tspan = taus.back() - taus.front();
    for (std::size_t i = 0; i < grid; ++i) {
      coords[i] = (taus[i] - taus.front()) / tspan;
    }
  }
  coords.front() = 0.0;
  coords.back() = 1.0;
  return coords;
}

/// Bootstrap rank probabilities: per_task[t](i, r) is the probability that
/// algorithm i attains rank r+1 on task t when every algorithm's runs are
/// re-drawn and algorithms are ordered by resampled task mean (rank 1 is
/// best). Ties split their probability mass evenly over the tied ranks,
/// which keeps each matrix doubly stochastic.
struct RankDistribution {
  std::vector<std::string> algorithms;
  std::vector<std::string> tasks;
  std::vector<std::vector<std::vector<double>>> per_task;  // [task][alg][rank]
  std::vector<std::vector<double>> mean_matrix;            // [alg][rank]
};

inline RankDistribution rank_distribution(const std::vector<ScoreSet>& sets,
                                          std::size_t replicates = 200000,
                                          std::uint64_t seed = 0,
                                          unsigned threads = 1) {
  if (sets.empty()) throw ValidationError("rank_distribution: no score sets");
  if (replicates < 1) throw ValidationError("replicates must be >= 1");
  const std::size_t algs = sets.size();
  if (algs > 20) {
    throw ValidationError("rank_distribution supports at most 20 algorithms");
  }
  const auto& tasks = sets.front().tasks();
  const std::size_t task_count = tasks.size();

  // Common-task index map: run_index[a][t] is algorithm a's index of task t.
  std::vector<std::vector<std::size_t>> run_index(algs);
  for (std::size_t a = 0; a < algs; ++a) {
    if (sets[a].task_count() != task_count) {
      throw ValidationError("rank_distribution: task sets differ across algorithms");
    }
    run_index[a].reserve(task_count);
    for (const auto& t : tasks) {
      const auto idx = sets[a].index_of(t);
      if (!idx) {
        throw ValidationError("rank_distribution: algorithm '" +
                              sets[a].algorithm_id() + "' is missing task '" +
                              t + "'");
      }
      run_index[a].push_back(*idx);
    }
  }

  // Tie mass in units of 1/unit so the accumulation is integer-exact and
  // therefore independent of the thread partition.
  std::uint64_t unit = 1;
  for (std::size_t g = 2; g <= algs; ++g) unit = std::lcm(unit, g);
  using MassCube = std::vector<std::vector<std::vector<std::uint64_t>>>;
  const MassCube zeros(task_count,
                       std::vector<std::vector<std::uint64_t>>(
                           algs, std::vector<std::uint64_t>(algs, 0)));
  const unsigned workers = std::max(
      1u, static_cast<unsigned>(std::min<std::size_t>(threads, replicates)));
  std::vector<MassCube> partials(workers, zeros);
  detail::parallel_for_workers(replicates, workers, [&](unsigned w, std::size_t b) {
    auto& local = partials[w];
    Philox rng(seed, b);
    std::vector<double> means(algs);
    std::vector<std::size_t> order(algs);
    for (std::size_t t = 0; t < task_count; ++t) {
      for (std::size_t a = 0; a < algs; ++a) {
        const auto& r = sets[a].runs(run_index[a][t]);
        double sum = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
          sum += r[rng.next_index(r.size())];
        }
        means[a] = sum / static_cast<double>(r.size());
      }
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (means[i] != means[j]) return means[i] > means[j];
        return i < j;
      });
      std::size_t pos = 0;
      while (pos < algs) {
        std::size_t end = pos + 1;
        while (end < algs && means[order[end]] == means[order[pos]]) ++end;
        const std::uint64_t share = unit / (end - pos);
        for (std::size_t k = pos; k < end; ++k) {
          for (std::size_t rank = pos; rank < end; ++rank) {
            local[t][order[k]][rank] += share;
          }
        }
        pos = end;
      }
    }
  });

  RankDistribution result;
  result.algorithms.reserve(algs);
  for (const auto& s : sets) result.algorithms.push_back(s.algorithm_id());
  result.tasks = tasks;
  result.per_task.assign(
      task_count,
      std::vector<std::vector<double>>(algs, std::vector<double>(algs, 0.0)));
  result.mean_matrix.assign(algs, std::vector<double>(algs, 0.0));
  const double denom = static_cast<double>(unit) * static_cast<double>(replicates);
  for (std::size_t t = 0; t < task_count; ++t) {
    for (std::size_t a = 0; a < algs; ++a) {
      for (std::size_t r = 0; r < algs; ++r) {
        std::uint64_t total = 0;
        for (const auto& part : partials) total += part[t][a][r];
        result.per_task[t][a][r] = static_cast<double>(total) / denom;
        result.mean_matrix[a][r] += static_cast<double>(total);
      }
    }
  }
  const double mean_denom = denom * static_cast<double>(task_count);
  for (auto& row : result.mean_matrix) {
    for (double& v : row) v /= mean_denom;
  }
  return result;
}

}  // namespace precipice
