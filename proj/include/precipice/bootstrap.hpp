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
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "precipice/errors.hpp"
#include "precipice/normal.hpp"
#include "precipice/rng.hpp"
#include "precipice/score_set.hpp"

namespace precipice {

enum class ResampleKind {
  runs_within_tasks,  // classic stratified bootstrap over runs
  tasks_and_runs,     // resample the task list first, then runs within
};

struct ResampleStrategy {
  ResampleKind kind = ResampleKind::runs_within_tasks;
  /// m/n bootstrap: draw this many runs per task instead of N_m.
  std::optional<std::size_t> subsample_size;
};

enum class CiMethod { percentile, basic, bc, bca };

inline std::string ci_method_name(CiMethod m) {
  switch (m) {
    case CiMethod::percentile: return "percentile";
    case CiMethod::basic: return "basic";
    case CiMethod::bc: return "bc";
    case CiMethod::bca: return "bca";
  }
  return "unknown";
}

inline CiMethod parse_ci_method(std::string_view name) {
  if (name == "percentile") return CiMethod::percentile;
  if (name == "basic") return CiMethod::basic;
  if (name == "bc") return CiMethod::bc;
  if (name == "bca") return CiMethod::bca;
  throw ConfigError("unknown ci method '" + std::string(name) + "'");
}

struct IntervalEstimate {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double nominal_coverage = 0.95;
  CiMethod method = CiMethod::percentile;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  double width() const noexcept { return upper - lower; }
  bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

/// Linear-interpolation empirical quantile of a sorted sequence;
/// q=0 gives the minimum, q=1 the maximum.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of empty sequence");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ValidationError("quantile: q must lie in [0, 1]");
  }
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t idx = static_cast<std::size_t>(pos);
  if (idx + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(idx);
  return sorted[idx] + frac * (sorted[idx + 1] - sorted[idx]);
}

inline double quantile(std::vector<double> samples, double q) {
  std::sort(samples.begin(), samples.end());
  return quantile_sorted(samples, q);
}

namespace detail {

inline void check_strategy(const ScoreSet& s, const ResampleStrategy& strategy) {
  if (strategy.subsample_size) {
    const std::size_t m = *strategy.subsample_size;
    if (m < 1 || m > s.min_run_count()) {
      throw ValidationError(
          "subsample_size must lie in [1, min task run count]");
    }
  }
}

inline std::vector<double> resample_runs(const std::vector<double>& runs,
                                         std::size_t draw_count, Philox& rng) {
  std::vector<double> out;
  out.reserve(draw_count);
  for (std::size_t i = 0; i < draw_count; ++i) {
    out.push_back(runs[rng.next_index(runs.size())]);
  }
  return out;
}

/// Runs fn(worker, i) for i in [0, count) over contiguous per-worker
/// chunks. Work item i always lands on worker i / chunk, so worker-local
/// state never races. The lowest-index exception wins, which keeps error
/// reporting independent of scheduling.
template <typename Fn>
void parallel_for_workers(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(0u, i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  std::vector<std::pair<std::size_t, std::exception_ptr>> errors(
      workers, {std::numeric_limits<std::size_t>::max(), nullptr});
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = static_cast<std::size_t>(w) * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          fn(w, i);
        } catch (...) {
          errors[w] = {i, std::current_exception()};
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::size_t first = std::numeric_limits<std::size_t>::max();
  std::exception_ptr eptr;
  for (const auto& [idx, e] : errors) {
    if (e && idx < first) {
      first = idx;
      eptr = e;
    }
  }
  if (eptr) std::rethrow_exception(eptr);
}

template <typename Fn>
void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
  parallel_for_workers(count, threads,
                       [&fn](unsigned, std::size_t i) { fn(i); });
}

}  // namespace detail

/// One stratified bootstrap draw. runs_within_tasks keeps the task list
/// fixed and redraws each task's runs with replacement; tasks_and_runs
/// first draws M tasks with replacement and then redraws runs within each
/// drawn task (duplicate draws get a "#k" suffix to keep names unique).
inline ScoreSet stratified_resample(const ScoreSet& s,
                                    const ResampleStrategy& strategy,
                                    Philox& rng) {
  detail::check_strategy(s, strategy);
  const std::size_t task_count = s.task_count();
  std::vector<std::string> tasks;
  std::vector<std::vector<double>> runs;
  tasks.reserve(task_count);
  runs.reserve(task_count);

  if (strategy.kind == ResampleKind::runs_within_tasks) {
    tasks = s.tasks();
    for (std::size_t m = 0; m < task_count; ++m) {
      const std::size_t draws =
          strategy.subsample_size ? *strategy.subsample_size : s.run_count(m);
      runs.push_back(detail::resample_runs(s.runs(m), draws, rng));
    }
  } else {
    std::vector<std::size_t> draw_counts(task_count, 0);
    for (std::size_t d = 0; d < task_count; ++d) {
      const std::size_t m = rng.next_index(task_count);
      const std::size_t occurrence = ++draw_counts[m];
      tasks.push_back(occurrence == 1
                          ? s.task_name(m)
                          : s.task_name(m) + "#" + std::to_string(occurrence));
      const std::size_t draws =
          strategy.subsample_size ? *strategy.subsample_size : s.run_count(m);
      runs.push_back(detail::resample_runs(s.runs(m), draws, rng));
    }
  }
  return ScoreSet(s.algorithm_id(), std::move(tasks), std::move(runs));
}

/// Bootstrap sampling distribution of `statistic`. Replicate b always uses
/// the substream (seed, b), so the output is a pure function of the inputs
/// and identical for any thread count.
inline std::vector<double> bootstrap_distribution(
    const ScoreSet& s, const Statistic& statistic, std::size_t replicates,
    const ResampleStrategy& strategy, std::uint64_t seed,
    unsigned threads = 1) {
  if (replicates < 1) throw ValidationError("replicates must be >= 1");
  detail::check_strategy(s, strategy);
  std::vector<double> out(replicates);
  detail::parallel_for_index(replicates, threads, [&](std::size_t b) {
    Philox rng(seed, b);
    try {
      out[b] = statistic(stratified_resample(s, strategy, rng));
    } catch (const std::exception& e) {
      throw ValidationError("bootstrap replicate " + std::to_string(b) + ": " +
                            e.what());
    }
  });
  return out;
}

namespace detail {

// Fraction of the bootstrap distribution strictly below the point estimate,
// mapped through the normal quantile. Degenerate fractions are clamped to
// 1/(B+1) from either side so the correction stays finite.
inline double bias_correction_z0(const std::vector<double>& dist,
                                 double point) {
  std::size_t below = 0;
  for (double v : dist) below += v < point ? 1 : 0;
  const double b = static_cast<double>(dist.size());
  double frac = static_cast<double>(below) / b;
  const double eps = 1.0 / (b + 1.0);
  if (frac <= 0.0) frac = eps;
  if (frac >= 1.0) frac = 1.0 - eps;
  return inverse_normal_cdf(frac);
}

// BCa acceleration from the stratified jackknife: leave out one run of one
// task at a time. A task whose single run is removed drops out of that
// jackknife sample entirely; if no valid sample exists the acceleration
// falls back to zero.
inline double jackknife_acceleration(const ScoreSet& s,
                                     const Statistic& statistic) {
  std::vector<double> loo;
  loo.reserve(s.total_runs());
  for (std::size_t m = 0; m < s.task_count(); ++m) {
    for (std::size_t i = 0; i < s.run_count(m); ++i) {
      std::vector<std::string> tasks;
      std::vector<std::vector<double>> runs;
      tasks.reserve(s.task_count());
      runs.reserve(s.task_count());
      for (std::size_t k = 0; k < s.task_count(); ++k) {
        if (k == m && s.run_count(k) == 1) continue;
        std::vector<double> row = s.runs(k);
        if (k == m) row.erase(row.begin() + static_cast<std::ptrdiff_t>(i));
        tasks.push_back(s.task_name(k));
        runs.push_back(std::move(row));
      }
      if (tasks.empty()) continue;
      loo.push_back(
          statistic(ScoreSet(s.algorithm_id(), std::move(tasks), std::move(runs))));
    }
  }
  if (loo.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : loo) mean += v;
  mean /= static_cast<double>(loo.size());
  double sq = 0.0, cube = 0.0;
  for (double v : loo) {
    const double d = mean - v;
    sq += d * d;
    cube += d * d * d;
  }
  if (sq <= 0.0) return 0.0;
  return cube / (6.0 * std::pow(sq, 1.5));
}

// Quantile position after bias/skewness adjustment. z0 = 0 and a = 0 is
// the identity, returned without the normal round-trip so that bc/bca
// degrade to the plain percentile interval exactly.
inline double adjusted_position(double z0, double accel, double q) {
  if (z0 == 0.0 && accel == 0.0) return q;
  const double zq = inverse_normal_cdf(q);
  const double num = z0 + zq;
  const double pos = normal_cdf(z0 + num / (1.0 - accel * num));
  return std::clamp(pos, 0.0, 1.0);
}

}  // namespace detail

/// Maps a realized bootstrap distribution to interval bounds.
///
/// percentile: [q_lo, q_hi] of the bootstrap distribution.
/// basic:      [2*point - q_hi, 2*point - q_lo] (reverse percentile).
/// bc:         percentile at positions shifted by the bias correction z0,
///             where z0 comes from the fraction of replicates below point.
/// bca:        bc plus the caller-supplied acceleration.
///
/// Degenerate bootstrap distributions yield zero-width intervals. Bounds
/// are swapped if a method's formula inverts them.
inline std::pair<double, double> interval_from_distribution(
    std::vector<double> dist, double point, CiMethod method,
    double nominal_coverage, double acceleration = 0.0) {
  if (!(nominal_coverage > 0.0 && nominal_coverage < 1.0)) {
    throw ValidationError("nominal_coverage must lie in (0, 1)");
  }
  std::sort(dist.begin(), dist.end());
  const double alpha_lo = (1.0 - nominal_coverage) / 2.0;
  const double alpha_hi = 1.0 - alpha_lo;
  double lower = 0.0, upper = 0.0;
  switch (method) {
    case CiMethod::percentile:
      lower = quantile_sorted(dist, alpha_lo);
      upper = quantile_sorted(dist, alpha_hi);
      break;
    case CiMethod::basic:
      lower = 2.0 * point - quantile_sorted(dist, alpha_hi);
      upper = 2.0 * point - quantile_sorted(dist, alpha_lo);
      break;
    case CiMethod::bc:
    case CiMethod::bca: {
      const double z0 = detail::bias_correction_z0(dist, point);
      const double accel = method == CiMethod::bca ? acceleration : 0.0;
      lower = quantile_sorted(dist, detail::adjusted_position(z0, accel, alpha_lo));
      upper = quantile_sorted(dist, detail::adjusted_position(z0, accel, alpha_hi));
      break;
    }
  }
  if (lower > upper) std::swap(lower, upper);
  return {lower, upper};
}

/// Bootstrap confidence interval for `statistic` on `s`. Replicate b uses
/// substream (seed, b); the result is identical for any thread count.
inline IntervalEstimate confidence_interval(
    const ScoreSet& s, const Statistic& statistic, CiMethod method,
    double nominal_coverage = 0.95, std::size_t replicates = 50000,
    const ResampleStrategy& strategy = {}, std::uint64_t seed = 0,
    unsigned threads = 1) {
  if (replicates < 10) {
    throw ValidationError("confidence_interval needs >= 10 replicates");
  }
  if (!(nominal_coverage > 0.0 && nominal_coverage < 1.0)) {
    throw ValidationError("nominal_coverage must lie in (0, 1)");
  }
  const double point = statistic(s);
  std::vector<double> dist =
      bootstrap_distribution(s, statistic, replicates, strategy, seed, threads);
  const double accel = method == CiMethod::bca
                           ? detail::jackknife_acceleration(s, statistic)
                           : 0.0;
  const auto [lower, upper] = interval_from_distribution(
      std::move(dist), point, method, nominal_coverage, accel);

  IntervalEstimate est;
  est.point = point;
  est.lower = lower;
  est.upper = upper;
  est.nominal_coverage = nominal_coverage;
  est.method = method;
  est.replicates = replicates;
  est.seed = seed;
  return est;
}

}  // namespace precipice
