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
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "precipice/aggregates.hpp"
#include "precipice/bootstrap.hpp"
#include "precipice/errors.hpp"
#include "precipice/rng.hpp"
#include "precipice/score_io.hpp"
#include "precipice/score_set.hpp"

// Monte Carlo experiments that validate the estimators themselves: treat a
// large multi-run pool as the population, subsample it the way a real
// benchmark evaluation would, and measure what the estimators report
// against the pool truth.

namespace precipice {

struct NamedStatistic {
  std::string name;
  Statistic fn;
};

inline NamedStatistic named_statistic(const MetricSpec& spec) {
  return {spec.name(), make_statistic(spec)};
}

/// A ScoreSet with enough runs per task to stand in for the population.
/// Statistics evaluated on the full pool serve as ground truth.
struct ScorePool {
  ScoreSet scores;
  mutable std::map<std::string, double> truth_cache;

  double truth(const NamedStatistic& statistic) const {
    auto it = truth_cache.find(statistic.name);
    if (it != truth_cache.end()) return it->second;
    const double v = statistic.fn(scores);
    truth_cache.emplace(statistic.name, v);
    return v;
  }
};

// ---------------------------------------------------------------------------
// Synthetic pools

struct FamilySpec {
  enum class Kind { gaussian, lognormal, mixture, uniform } kind = Kind::gaussian;
  double mu = 1.0;      // gaussian / lognormal / first mixture component
  double sigma = 0.1;   // likewise
  double low = 0.0;     // uniform
  double high = 1.0;    // uniform
  double weight = 0.5;  // mixture: probability of the first component
  double mu2 = 0.0;     // mixture: second component
  double sigma2 = 1.0;

  void validate() const {
    const bool params_finite =
        std::isfinite(mu) && std::isfinite(sigma) && std::isfinite(low) &&
        std::isfinite(high) && std::isfinite(weight) && std::isfinite(mu2) &&
        std::isfinite(sigma2);
    if (!params_finite) throw ValidationError("family parameters must be finite");
    if (sigma < 0.0 || sigma2 < 0.0) {
      throw ValidationError("family sigma must be >= 0");
    }
    if (kind == Kind::uniform && high < low) {
      throw ValidationError("uniform family needs high >= low");
    }
    if (kind == Kind::mixture && !(weight >= 0.0 && weight <= 1.0)) {
      throw ValidationError("mixture weight must lie in [0, 1]");
    }
  }

  double sample(Philox& rng) const {
    switch (kind) {
      case Kind::gaussian:
        return mu + sigma * rng.next_gaussian();
      case Kind::lognormal:
        return std::exp(mu + sigma * rng.next_gaussian());
      case Kind::uniform:
        return low + (high - low) * rng.next_double();
      case Kind::mixture:
        return rng.next_double() < weight ? mu + sigma * rng.next_gaussian()
                                          : mu2 + sigma2 * rng.next_gaussian();
    }
    return 0.0;
  }
};

struct SyntheticPoolSpec {
  std::size_t task_count = 1;
  std::size_t pool_size = 100;  // runs per task
  std::vector<FamilySpec> families;  // one shared spec, or one per task
  std::uint64_t seed = 0;
  std::string name = "synthetic";

  void validate() const {
    if (task_count < 1) throw ValidationError("pool needs at least one task");
    if (pool_size < 1) throw ValidationError("pool_size must be >= 1");
    if (families.empty()) throw ValidationError("pool needs a score family");
    if (families.size() != 1 && families.size() != task_count) {
      throw ValidationError("families must be shared or one per task");
    }
    for (const auto& f : families) f.validate();
  }
};

/// Deterministic in the spec seed; task m draws from substream (seed, m).
inline ScorePool generate_pool(const SyntheticPoolSpec& spec) {
  spec.validate();
  std::vector<std::string> tasks;
  std::vector<std::vector<double>> runs;
  tasks.reserve(spec.task_count);
  runs.reserve(spec.task_count);
  for (std::size_t m = 0; m < spec.task_count; ++m) {
    const FamilySpec& family =
        spec.families.size() == 1 ? spec.families[0] : spec.families[m];
    Philox rng(spec.seed, m);
    std::vector<double> row;
    row.reserve(spec.pool_size);
    for (std::size_t i = 0; i < spec.pool_size; ++i) {
      row.push_back(family.sample(rng));
    }
    tasks.push_back("t" + std::to_string(m + 1));
    runs.push_back(std::move(row));
  }
  return ScorePool{ScoreSet(spec.name, std::move(tasks), std::move(runs)), {}};
}

// ---------------------------------------------------------------------------
// Subsampling

/// n runs per task drawn with replacement (the bias / sampling-distribution
/// protocol).
inline ScoreSet subsample_with_replacement(const ScoreSet& pool, std::size_t n,
                                           Philox& rng) {
  if (n < 1) throw ValidationError("subsample size must be >= 1");
  std::vector<std::vector<double>> runs;
  runs.reserve(pool.task_count());
  for (std::size_t m = 0; m < pool.task_count(); ++m) {
    const auto& r = pool.runs(m);
    std::vector<double> row;
    row.reserve(n);
    for (std::size_t i = 0; i < n; ++i) row.push_back(r[rng.next_index(r.size())]);
    runs.push_back(std::move(row));
  }
  return ScoreSet(pool.algorithm_id(), pool.tasks(), std::move(runs));
}

/// k runs per task drawn without replacement (the coverage protocol).
inline ScoreSet subsample_without_replacement(const ScoreSet& pool,
                                              std::size_t k, Philox& rng) {
  if (k < 1) throw ValidationError("subsample size must be >= 1");
  std::vector<std::vector<double>> runs;
  runs.reserve(pool.task_count());
  for (std::size_t m = 0; m < pool.task_count(); ++m) {
    const auto& r = pool.runs(m);
    if (k > r.size()) {
      throw ValidationError("subsample size " + std::to_string(k) +
                            " exceeds pool runs for task '" +
                            pool.task_name(m) + "'");
    }
    std::vector<std::size_t> idx(r.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<double> row;
    row.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + rng.next_index(r.size() - i)]);
      row.push_back(r[idx[i]]);
    }
    runs.push_back(std::move(row));
  }
  return ScoreSet(pool.algorithm_id(), pool.tasks(), std::move(runs));
}

// ---------------------------------------------------------------------------
// Experiments

/// Sampling distribution of `statistic` under repeated n-runs-per-task
/// subsampling with replacement. Trial t uses substream (seed, t).
inline std::vector<double> sampling_distribution(const ScorePool& pool,
                                                 std::size_t n,
                                                 std::size_t trials,
                                                 const Statistic& statistic,
                                                 std::uint64_t seed = 0,
                                                 unsigned threads = 1) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  std::vector<double> out(trials);
  detail::parallel_for_index(trials, threads, [&](std::size_t t) {
    Philox rng(seed, t);
    out[t] = statistic(subsample_with_replacement(pool.scores, n, rng));
  });
  return out;
}

/// Expected value of `statistic` as a function of the per-task run budget.
inline std::vector<std::pair<std::size_t, double>> expected_statistic_curve(
    const ScorePool& pool, const std::vector<std::size_t>& subsample_sizes,
    std::size_t trials, const Statistic& statistic, std::uint64_t seed = 0,
    unsigned threads = 1) {
  std::vector<std::pair<std::size_t, double>> curve;
  curve.reserve(subsample_sizes.size());
  for (std::size_t n : subsample_sizes) {
    const auto dist = sampling_distribution(pool, n, trials, statistic,
                                            derive_seed(seed, n), threads);
    double mean = 0.0;
    for (double v : dist) mean += v;
    curve.emplace_back(n, mean / static_cast<double>(dist.size()));
  }
  return curve;
}

struct CoverageResult {
  double coverage_percent = 0.0;
  double mean_ci_width = 0.0;
  double pool_truth = 0.0;
  std::size_t trials = 0;
};

/// Fraction of bootstrap CIs (built from k runs per task drawn without
/// replacement) that contain the statistic's full-pool value.
inline CoverageResult coverage_experiment(
    const ScorePool& pool, std::size_t k, CiMethod method,
    const NamedStatistic& statistic, std::size_t trials = 10000,
    double nominal = 0.95, std::size_t ci_replicates = 1000,
    std::uint64_t seed = 0, unsigned threads = 1) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  const double truth = pool.truth(statistic);
  std::vector<char> contained(trials, 0);
  std::vector<double> widths(trials, 0.0);
  detail::parallel_for_index(trials, threads, [&](std::size_t t) {
    Philox rng(seed, t);
    const ScoreSet sample = subsample_without_replacement(pool.scores, k, rng);
    const IntervalEstimate ci =
        confidence_interval(sample, statistic.fn, method, nominal,
                            ci_replicates, {}, derive_seed(seed, t));
    contained[t] = ci.contains(truth) ? 1 : 0;
    widths[t] = ci.width();
  });
  CoverageResult result;
  result.trials = trials;
  result.pool_truth = truth;
  std::size_t hits = 0;
  double width_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    hits += contained[t];
    width_sum += widths[t];
  }
  result.coverage_percent =
      100.0 * static_cast<double>(hits) / static_cast<double>(trials);
  result.mean_ci_width = width_sum / static_cast<double>(trials);
  return result;
}

struct LiftDetectionResult {
  double lift_percent = 0.0;
  std::vector<IntervalEstimate> trial_cis;  // point = observed lift per trial
  double mean_observed_lift = 0.0;
  double fraction_containing_zero = 0.0;
  double fraction_excluding_zero = 0.0;
};

/// Draws two independent n-run experiments from the pool, inflates the
/// second by lift_percent, and builds a stratified-bootstrap CI for the
/// observed relative lift in each trial. The lift is relative when the
/// base statistic is positive and an absolute difference otherwise.
inline LiftDetectionResult lift_detection(
    const ScorePool& pool, double lift_percent, std::size_t n,
    std::size_t trials, const Statistic& statistic, double nominal = 0.95,
    std::size_t ci_replicates = 2000, std::uint64_t seed = 0,
    unsigned threads = 1) {
  if (lift_percent < 0.0) {
    throw ValidationError("lift_percent must be >= 0");
  }
  if (trials < 1) throw ValidationError("trials must be >= 1");
  const double factor = 1.0 + lift_percent / 100.0;
  const auto observed_lift = [](double lifted, double base) {
    return base > 0.0 ? (lifted - base) / base : lifted - base;
  };
  LiftDetectionResult result;
  result.lift_percent = lift_percent;
  result.trial_cis.resize(trials);

  detail::parallel_for_index(trials, threads, [&](std::size_t t) {
    Philox rng(seed, t);
    const ScoreSet base = subsample_with_replacement(pool.scores, n, rng);
    const ScoreSet lifted =
        scale_scores(subsample_with_replacement(pool.scores, n, rng), factor);

    const std::uint64_t ci_seed = derive_seed(seed, t);
    std::vector<double> dist(ci_replicates);
    const ResampleStrategy strategy;
    for (std::size_t b = 0; b < ci_replicates; ++b) {
      Philox rb(ci_seed, b);
      const double sb = statistic(stratified_resample(base, strategy, rb));
      const double sl = statistic(stratified_resample(lifted, strategy, rb));
      dist[b] = observed_lift(sl, sb);
    }
    std::sort(dist.begin(), dist.end());
    const double alpha = (1.0 - nominal) / 2.0;
    IntervalEstimate ci;
    ci.point = observed_lift(statistic(lifted), statistic(base));
    ci.lower = quantile_sorted(dist, alpha);
    ci.upper = quantile_sorted(dist, 1.0 - alpha);
    ci.nominal_coverage = nominal;
    ci.method = CiMethod::percentile;
    ci.replicates = ci_replicates;
    ci.seed = ci_seed;
    result.trial_cis[t] = ci;
  });

  double lift_sum = 0.0;
  std::size_t containing = 0;
  for (const auto& ci : result.trial_cis) {
    lift_sum += ci.point;
    containing += ci.contains(0.0) ? 1 : 0;
  }
  result.mean_observed_lift = lift_sum / static_cast<double>(trials);
  result.fraction_containing_zero =
      static_cast<double>(containing) / static_cast<double>(trials);
  result.fraction_excluding_zero = 1.0 - result.fraction_containing_zero;
  return result;
}

/// MSE of the pooled trimmed-mean family against the full-pool value of the
/// same estimator, under n-runs-per-task subsampling with replacement.
inline std::vector<std::pair<double, double>> estimator_mse(
    const ScorePool& pool, const std::vector<double>& trim_fractions,
    std::size_t n = 10, std::size_t trials = 20000, std::uint64_t seed = 0,
    unsigned threads = 1) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (trim_fractions.empty()) {
    throw ValidationError("estimator_mse needs at least one trim fraction");
  }
  std::vector<double> truths;
  truths.reserve(trim_fractions.size());
  {
    std::vector<double> pooled = pooled_scores(pool.scores);
    std::sort(pooled.begin(), pooled.end());
    for (double f : trim_fractions) {
      truths.push_back(trimmed_mean_sorted(pooled, f));
    }
  }
  // squared_error[t * F + j]: trial-major so the final reduction is a
  // fixed-order sum regardless of thread count.
  const std::size_t fcount = trim_fractions.size();
  std::vector<double> squared_error(trials * fcount, 0.0);
  detail::parallel_for_index(trials, threads, [&](std::size_t t) {
    Philox rng(seed, t);
    std::vector<double> pooled =
        pooled_scores(subsample_with_replacement(pool.scores, n, rng));
    std::sort(pooled.begin(), pooled.end());
    for (std::size_t j = 0; j < fcount; ++j) {
      const double err = trimmed_mean_sorted(pooled, trim_fractions[j]) - truths[j];
      squared_error[t * fcount + j] = err * err;
    }
  });
  std::vector<std::pair<double, double>> mse;
  mse.reserve(fcount);
  for (std::size_t j = 0; j < fcount; ++j) {
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) sum += squared_error[t * fcount + j];
    mse.emplace_back(trim_fractions[j], sum / static_cast<double>(trials));
  }
  return mse;
}

// ---------------------------------------------------------------------------
// Evaluation protocols (end performance vs max-based reporting)

/// Per task, per run: the ordered evaluation scores recorded during
/// training. The final score of a run is the last element.
struct EvalSeries {
  std::string algorithm_id;
  std::vector<std::string> tasks;
  std::vector<std::vector<std::vector<double>>> evals;  // [task][run][eval]
};

enum class ProtocolKind { final_eval, max_over_evals, max_over_configs };

struct Protocol {
  ProtocolKind kind = ProtocolKind::final_eval;
  std::size_t config_count = 1;  // max_over_configs only
};

/// Reduces an EvalSeries to one score per run (or per task for the
/// max-over-configs protocol, which reports the best config's mean final
/// score as a single run).
inline ScoreSet protocol_scores(const EvalSeries& series,
                                const Protocol& protocol) {
  if (series.tasks.size() != series.evals.size()) {
    throw ValidationError("EvalSeries task and eval counts differ");
  }
  std::vector<std::vector<double>> runs;
  runs.reserve(series.tasks.size());
  for (std::size_t m = 0; m < series.tasks.size(); ++m) {
    const auto& task_runs = series.evals[m];
    if (task_runs.empty()) {
      throw ValidationError("EvalSeries task '" + series.tasks[m] +
                            "' has no runs");
    }
    std::vector<double> finals;
    finals.reserve(task_runs.size());
    std::vector<double> maxima;
    maxima.reserve(task_runs.size());
    for (const auto& evals : task_runs) {
      if (evals.empty()) {
        throw ValidationError("EvalSeries task '" + series.tasks[m] +
                              "' has an empty evaluation series");
      }
      finals.push_back(evals.back());
      maxima.push_back(*std::max_element(evals.begin(), evals.end()));
    }
    switch (protocol.kind) {
      case ProtocolKind::final_eval:
        runs.push_back(std::move(finals));
        break;
      case ProtocolKind::max_over_evals:
        runs.push_back(std::move(maxima));
        break;
      case ProtocolKind::max_over_configs: {
        const std::size_t c = protocol.config_count;
        if (c < 1 || c > finals.size() || finals.size() % c != 0) {
          throw ValidationError(
              "max_over_configs: runs per task must split evenly into " +
              std::to_string(c) + " configs");
        }
        const std::size_t per_config = finals.size() / c;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < c; ++g) {
          double sum = 0.0;
          for (std::size_t i = 0; i < per_config; ++i) {
            sum += finals[g * per_config + i];
          }
          best = std::max(best, sum / static_cast<double>(per_config));
        }
        runs.push_back({best});
        break;
      }
    }
  }
  return ScoreSet(series.algorithm_id, series.tasks, std::move(runs));
}

struct EvalSeriesSpec {
  std::size_t task_count = 4;
  std::size_t runs_per_task = 10;
  std::size_t evals_per_run = 10;
  FamilySpec plateau;          // per-run converged performance level
  double noise_sigma = 0.1;    // evaluation noise around the plateau
  std::uint64_t seed = 0;
  std::string name = "synthetic";
};

/// Noisy-plateau training curves: each run settles at a drawn plateau and
/// every recorded evaluation scatters around it. Under this model the
/// max-over-evaluations protocol is biased upward by construction.
inline EvalSeries synthetic_eval_series(const EvalSeriesSpec& spec) {
  if (spec.task_count < 1 || spec.runs_per_task < 1 || spec.evals_per_run < 1) {
    throw ValidationError("EvalSeriesSpec dimensions must be >= 1");
  }
  if (!(spec.noise_sigma >= 0.0)) {
    throw ValidationError("noise_sigma must be >= 0");
  }
  spec.plateau.validate();
  EvalSeries series;
  series.algorithm_id = spec.name;
  for (std::size_t m = 0; m < spec.task_count; ++m) {
    Philox rng(spec.seed, m);
    series.tasks.push_back("t" + std::to_string(m + 1));
    std::vector<std::vector<double>> task_runs;
    task_runs.reserve(spec.runs_per_task);
    for (std::size_t r = 0; r < spec.runs_per_task; ++r) {
      const double plateau = spec.plateau.sample(rng);
      std::vector<double> evals;
      evals.reserve(spec.evals_per_run);
      for (std::size_t e = 0; e < spec.evals_per_run; ++e) {
        evals.push_back(plateau + spec.noise_sigma * rng.next_gaussian());
      }
      task_runs.push_back(std::move(evals));
    }
    series.evals.push_back(std::move(task_runs));
  }
  return series;
}

}  // namespace precipice
