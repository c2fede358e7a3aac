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
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "precipice/errors.hpp"
#include "precipice/harness.hpp"
#include "precipice/score_io.hpp"

// JSON-configured front end for the Monte Carlo harness. Config files name
// an experiment kind, a pool source (file or synthetic spec), a statistic,
// sizes, trial counts and a seed; results come back as tables plus a
// scalar summary, ready for JSON/CSV emission.

namespace precipice {

struct ExperimentTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string kind;
  nlohmann::ordered_json params;   // resolved configuration, echoed back
  nlohmann::ordered_json summary;  // scalar results
  std::vector<ExperimentTable> tables;
};

namespace detail {

using Config = nlohmann::ordered_json;

inline const Config& require_key(const Config& config, const std::string& key) {
  if (!config.contains(key)) {
    throw ConfigError("config missing required key \"" + key + "\"");
  }
  return config.at(key);
}

inline std::uint64_t seed_from(const Config& config) {
  const auto& v = require_key(config, "seed");
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError("config key \"seed\" must be an integer");
  }
  return v.get<std::uint64_t>();
}

inline std::size_t size_from(const Config& config, const std::string& key) {
  const auto& v = require_key(config, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError("config key \"" + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline double number_from(const Config& config, const std::string& key) {
  const auto& v = require_key(config, key);
  if (!v.is_number()) {
    throw ConfigError("config key \"" + key + "\" must be a number");
  }
  return v.get<double>();
}

inline FamilySpec family_from(const Config& node) {
  if (!node.is_object() || !node.contains("kind")) {
    throw ConfigError("family spec needs a \"kind\"");
  }
  FamilySpec family;
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "gaussian") {
    family.kind = FamilySpec::Kind::gaussian;
  } else if (kind == "lognormal") {
    family.kind = FamilySpec::Kind::lognormal;
  } else if (kind == "uniform") {
    family.kind = FamilySpec::Kind::uniform;
  } else if (kind == "mixture") {
    family.kind = FamilySpec::Kind::mixture;
  } else {
    throw ConfigError("unknown family kind \"" + kind + "\"");
  }
  if (node.contains("mu")) family.mu = node.at("mu").get<double>();
  if (node.contains("sigma")) family.sigma = node.at("sigma").get<double>();
  if (node.contains("low")) family.low = node.at("low").get<double>();
  if (node.contains("high")) family.high = node.at("high").get<double>();
  if (node.contains("weight")) family.weight = node.at("weight").get<double>();
  if (node.contains("mu2")) family.mu2 = node.at("mu2").get<double>();
  if (node.contains("sigma2")) family.sigma2 = node.at("sigma2").get<double>();
  family.validate();
  return family;
}

inline SyntheticPoolSpec synthetic_spec_from(const Config& node) {
  SyntheticPoolSpec spec;
  spec.task_count = size_from(node, "tasks");
  spec.pool_size = size_from(node, "pool_size");
  if (node.contains("seed")) spec.seed = node.at("seed").get<std::uint64_t>();
  if (node.contains("name")) spec.name = node.at("name").get<std::string>();
  if (node.contains("families")) {
    for (const auto& f : node.at("families")) {
      spec.families.push_back(family_from(f));
    }
  } else {
    spec.families.push_back(family_from(require_key(node, "family")));
  }
  spec.validate();
  return spec;
}

inline ScorePool pool_from(const Config& config,
                           const std::filesystem::path& base_dir) {
  const auto& node = require_key(config, "pool");
  if (node.contains("synthetic")) {
    return generate_pool(synthetic_spec_from(node.at("synthetic")));
  }
  if (node.contains("file")) {
    std::filesystem::path path = node.at("file").get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    auto sets = load_scores_file(path);
    if (!node.contains("algorithm")) {
      if (sets.size() == 1) return ScorePool{std::move(sets.front()), {}};
      throw ConfigError(
          "pool file holds several algorithms; config needs \"algorithm\"");
    }
    const std::string algorithm = node.at("algorithm").get<std::string>();
    for (auto& s : sets) {
      if (s.algorithm_id() == algorithm) return ScorePool{std::move(s), {}};
    }
    throw ConfigError("pool file has no algorithm '" + algorithm + "'");
  }
  throw ConfigError("config key \"pool\" needs \"synthetic\" or \"file\"");
}

inline NamedStatistic statistic_from(const Config& config) {
  const auto& node = require_key(config, "statistic");
  if (node.is_string()) {
    return named_statistic(MetricSpec::parse(node.get<std::string>()));
  }
  if (node.is_object()) {
    const std::string name = require_key(node, "name").get<std::string>();
    const double trim =
        node.contains("trim_fraction") ? node.at("trim_fraction").get<double>() : 0.25;
    const double gamma = node.contains("gamma") ? node.at("gamma").get<double>() : 1.0;
    return named_statistic(MetricSpec::parse(name, trim, gamma));
  }
  throw ConfigError("config key \"statistic\" must be a name or an object");
}

inline double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

inline double standard_error_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = mean_of(xs);
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(sq / (n - 1.0) / n);
}

}  // namespace detail

/// Runs one JSON-configured experiment. Missing keys raise ConfigError
/// naming the key. File pools resolve relative to `base_dir`.
inline ExperimentReport run_experiment(
    const nlohmann::ordered_json& config,
    const std::filesystem::path& base_dir = ".", unsigned threads = 1) {
  using detail::require_key;
  if (!config.is_object()) {
    throw ConfigError("experiment config must be a json object");
  }
  const std::string kind = require_key(config, "kind").get<std::string>();
  const std::size_t trials = detail::size_from(config, "trials");
  const std::uint64_t seed = detail::seed_from(config);

  ExperimentReport report;
  report.kind = kind;
  report.params = config;

  if (kind == "sampling_distribution") {
    const ScorePool pool = detail::pool_from(config, base_dir);
    const NamedStatistic stat = detail::statistic_from(config);
    const std::size_t n = detail::size_from(config, "subsample_size");
    const auto dist =
        sampling_distribution(pool, n, trials, stat.fn, seed, threads);
    ExperimentTable table{"sampling_distribution", {"trial", "value"}, {}};
    table.rows.reserve(dist.size());
    for (std::size_t t = 0; t < dist.size(); ++t) {
      table.rows.push_back({static_cast<double>(t), dist[t]});
    }
    report.tables.push_back(std::move(table));
    report.summary = {{"statistic", stat.name},
                      {"mean", detail::mean_of(dist)},
                      {"mc_standard_error", detail::standard_error_of(dist)},
                      {"pool_truth", pool.truth(stat)}};
  } else if (kind == "bias_curve") {
    const ScorePool pool = detail::pool_from(config, base_dir);
    const NamedStatistic stat = detail::statistic_from(config);
    const auto& sizes_node = require_key(config, "subsample_sizes");
    if (!sizes_node.is_array() || sizes_node.empty()) {
      throw ConfigError("config key \"subsample_sizes\" must be a non-empty array");
    }
    const double truth = pool.truth(stat);
    ExperimentTable table{
        "bias_curve",
        {"subsample_size", "expected_value", "bias", "mc_standard_error"},
        {}};
    for (const auto& size_node : sizes_node) {
      const std::size_t n = size_node.get<std::size_t>();
      const auto dist = sampling_distribution(pool, n, trials, stat.fn,
                                              derive_seed(seed, n), threads);
      const double expected = detail::mean_of(dist);
      table.rows.push_back({static_cast<double>(n), expected, expected - truth,
                            detail::standard_error_of(dist)});
    }
    report.tables.push_back(std::move(table));
    report.summary = {{"statistic", stat.name}, {"pool_truth", truth}};
  } else if (kind == "coverage") {
    const ScorePool pool = detail::pool_from(config, base_dir);
    const NamedStatistic stat = detail::statistic_from(config);
    const std::size_t k = detail::size_from(config, "subsample_size");
    const CiMethod method =
        config.contains("ci_method")
            ? parse_ci_method(config.at("ci_method").get<std::string>())
            : CiMethod::percentile;
    const std::size_t ci_replicates =
        config.contains("ci_replicates") ? detail::size_from(config, "ci_replicates")
                                         : 1000;
    const double nominal = config.contains("nominal_coverage")
                               ? detail::number_from(config, "nominal_coverage")
                               : 0.95;
    const CoverageResult r = coverage_experiment(
        pool, k, method, stat, trials, nominal, ci_replicates, seed, threads);
    report.tables.push_back(ExperimentTable{
        "coverage",
        {"coverage_percent", "mean_ci_width"},
        {{r.coverage_percent, r.mean_ci_width}}});
    report.summary = {{"statistic", stat.name},
                      {"ci_method", ci_method_name(method)},
                      {"coverage_percent", r.coverage_percent},
                      {"mean_ci_width", r.mean_ci_width},
                      {"pool_truth", r.pool_truth}};
  } else if (kind == "lift") {
    const ScorePool pool = detail::pool_from(config, base_dir);
    const NamedStatistic stat = detail::statistic_from(config);
    const std::size_t n = detail::size_from(config, "subsample_size");
    const double lift_percent = detail::number_from(config, "lift_percent");
    const std::size_t ci_replicates =
        config.contains("ci_replicates") ? detail::size_from(config, "ci_replicates")
                                         : 2000;
    const double nominal = config.contains("nominal_coverage")
                               ? detail::number_from(config, "nominal_coverage")
                               : 0.95;
    const LiftDetectionResult r = lift_detection(
        pool, lift_percent, n, trials, stat.fn, nominal, ci_replicates, seed, threads);
    ExperimentTable table{"lift_cis", {"trial", "point", "lower", "upper"}, {}};
    table.rows.reserve(r.trial_cis.size());
    for (std::size_t t = 0; t < r.trial_cis.size(); ++t) {
      table.rows.push_back({static_cast<double>(t), r.trial_cis[t].point,
                            r.trial_cis[t].lower, r.trial_cis[t].upper});
    }
    report.tables.push_back(std::move(table));
    report.summary = {{"statistic", stat.name},
                      {"lift_percent", lift_percent},
                      {"mean_observed_lift", r.mean_observed_lift},
                      {"fraction_containing_zero", r.fraction_containing_zero},
                      {"fraction_excluding_zero", r.fraction_excluding_zero}};
  } else if (kind == "mse") {
    const ScorePool pool = detail::pool_from(config, base_dir);
    const std::size_t n = detail::size_from(config, "subsample_size");
    std::vector<double> trims;
    const auto& trims_node = require_key(config, "trim_fractions");
    if (!trims_node.is_array() || trims_node.empty()) {
      throw ConfigError("config key \"trim_fractions\" must be a non-empty array");
    }
    for (const auto& t : trims_node) trims.push_back(t.get<double>());
    const auto mse = estimator_mse(pool, trims, n, trials, seed, threads);
    ExperimentTable table{"mse", {"trim_fraction", "mse"}, {}};
    double best_trim = mse.front().first;
    double best_mse = mse.front().second;
    for (const auto& [trim, value] : mse) {
      table.rows.push_back({trim, value});
      if (value < best_mse) {
        best_mse = value;
        best_trim = trim;
      }
    }
    report.tables.push_back(std::move(table));
    report.summary = {{"best_trim_fraction", best_trim}, {"best_mse", best_mse}};
  } else if (kind == "protocol_bias") {
    EvalSeriesSpec spec;
    spec.task_count = detail::size_from(config, "tasks");
    spec.runs_per_task = detail::size_from(config, "runs_per_task");
    spec.evals_per_run = detail::size_from(config, "evals_per_run");
    spec.plateau = detail::family_from(require_key(config, "plateau"));
    if (config.contains("noise_sigma")) {
      spec.noise_sigma = config.at("noise_sigma").get<double>();
    }
    ExperimentTable table{"protocol_bias", {"trial", "iqm_final", "iqm_max"}, {}};
    std::vector<double> diffs;
    diffs.reserve(trials);
    double final_sum = 0.0, max_sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      spec.seed = derive_seed(seed, t);
      const EvalSeries series = synthetic_eval_series(spec);
      const double iqm_final =
          iqm(protocol_scores(series, {ProtocolKind::final_eval, 1}));
      const double iqm_max =
          iqm(protocol_scores(series, {ProtocolKind::max_over_evals, 1}));
      table.rows.push_back({static_cast<double>(t), iqm_final, iqm_max});
      diffs.push_back(iqm_max - iqm_final);
      final_sum += iqm_final;
      max_sum += iqm_max;
    }
    report.tables.push_back(std::move(table));
    report.summary = {
        {"iqm_final_mean", final_sum / static_cast<double>(trials)},
        {"iqm_max_mean", max_sum / static_cast<double>(trials)},
        {"mean_difference", detail::mean_of(diffs)},
        {"mc_standard_error", detail::standard_error_of(diffs)}};
  } else {
    throw ConfigError("unknown experiment kind \"" + kind + "\"");
  }
  return report;
}

}  // namespace precipice
