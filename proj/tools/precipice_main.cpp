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

// precipice: statistically careful benchmark evaluation from the command
// line. Subcommands: metrics, compare, profile, ranks, validate.
// Exit codes: 0 success, 1 IO/data error, 2 usage/config error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "precipice/aggregates.hpp"
#include "precipice/bootstrap.hpp"
#include "precipice/errors.hpp"
#include "precipice/experiment.hpp"
#include "precipice/profiles.hpp"
#include "precipice/report.hpp"
#include "precipice/score_io.hpp"
#include "precipice/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOptions {
  std::vector<std::string> inputs;
  std::string normalize_path;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_dir = ".";
  std::vector<std::string> formats;
};

void add_common(CLI::App* cmd, CommonOptions& opts,
                std::vector<std::string> default_formats) {
  cmd->add_option("--input", opts.inputs, "Score file(s), JSON or CSV")
      ->required();
  cmd->add_option("--normalize", opts.normalize_path,
                  "Per-task {low, high} normalization JSON");
  cmd->add_option("--seed", opts.seed, "Bootstrap seed")
      ->envname("PRECIPICE_SEED");
  cmd->add_option("--threads", opts.threads,
                  "Worker threads (results are identical for any count)");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  opts.formats = std::move(default_formats);
  cmd->add_option("--format", opts.formats,
                  "Artifact formats: json, csv, svg")
      ->delimiter(',');
}

bool wants(const CommonOptions& opts, std::string_view format) {
  for (const auto& f : opts.formats) {
    if (f == format) return true;
  }
  return false;
}

std::vector<precipice::ScoreSet> load_inputs(const CommonOptions& opts) {
  std::vector<precipice::ScoreSet> sets;
  for (const auto& path : opts.inputs) {
    for (auto& s : precipice::load_scores_file(path)) {
      sets.push_back(std::move(s));
    }
  }
  precipice::detail::check_unique_ids(sets);
  if (!opts.normalize_path.empty()) {
    const auto spec = precipice::load_normalization_file(opts.normalize_path);
    for (auto& s : sets) s = precipice::normalize(s, spec);
  }
  return sets;
}

std::vector<fs::path> input_paths(const CommonOptions& opts) {
  std::vector<fs::path> paths(opts.inputs.begin(), opts.inputs.end());
  if (!opts.normalize_path.empty()) paths.emplace_back(opts.normalize_path);
  return paths;
}

fs::path ensure_out_dir(const CommonOptions& opts) {
  fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw precipice::ParseError("cannot create output directory '" +
                                dir.string() + "'");
  }
  return dir;
}

std::uint64_t algorithm_seed(std::uint64_t seed, const std::string& alg) {
  return precipice::derive_seed(seed, precipice::fnv1a64(alg));
}

void check_bootstrap_flags(double coverage, std::size_t replicates) {
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw precipice::ConfigError("--coverage must lie in (0, 1)");
  }
  if (replicates < 10) {
    throw precipice::ConfigError("--replicates must be >= 10");
  }
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsOptions {
  CommonOptions common;
  std::string metrics = "median,iqm,mean,optimality_gap";
  std::string ci_method = "percentile";
  double coverage = 0.95;
  std::size_t replicates = 50000;
  std::string strategy = "runs";
  std::optional<std::size_t> subsample;
  double trim_fraction = 0.25;
  double gamma = 1.0;
};

int run_metrics(const MetricsOptions& opts) {
  check_bootstrap_flags(opts.coverage, opts.replicates);
  const auto sets = load_inputs(opts.common);
  const auto specs = precipice::parse_metric_list(opts.metrics,
                                                  opts.trim_fraction, opts.gamma);
  const precipice::CiMethod method = precipice::parse_ci_method(opts.ci_method);
  precipice::ResampleStrategy strategy;
  if (opts.strategy == "runs") {
    strategy.kind = precipice::ResampleKind::runs_within_tasks;
  } else if (opts.strategy == "tasks-and-runs") {
    strategy.kind = precipice::ResampleKind::tasks_and_runs;
  } else {
    throw precipice::ConfigError("unknown strategy '" + opts.strategy + "'");
  }

  ordered_json report =
      precipice::report_header("metrics", input_paths(opts.common));
  report["settings"] = {
      {"metrics", opts.metrics},
      {"ci_method", opts.ci_method},
      {"nominal_coverage", opts.coverage},
      {"replicates", opts.replicates},
      {"seed", opts.common.seed},
      {"strategy", opts.strategy},
      {"subsample",
       opts.subsample ? ordered_json(*opts.subsample) : ordered_json(nullptr)},
  };

  ordered_json algorithms = ordered_json::array();
  ordered_json metrics = ordered_json::object();
  precipice::CsvWriter csv({"algorithm", "metric", "point", "lower", "upper",
                            "method", "nominal_coverage", "replicates", "seed"});
  for (const auto& s : sets) {
    algorithms.push_back(s.algorithm_id());
    precipice::ResampleStrategy alg_strategy = strategy;
    if (opts.subsample) {
      // --subsample 0 picks ceil(min_m N_m / 2), the m/n bootstrap default.
      alg_strategy.subsample_size =
          *opts.subsample > 0 ? *opts.subsample : (s.min_run_count() + 1) / 2;
    }
    ordered_json per_metric = ordered_json::object();
    const std::uint64_t seed = algorithm_seed(opts.common.seed, s.algorithm_id());
    for (const auto& spec : specs) {
      const auto est = precipice::confidence_interval(
          s, precipice::make_statistic(spec), method, opts.coverage,
          opts.replicates, alg_strategy, seed, opts.common.threads);
      per_metric[spec.name()] = precipice::interval_to_json(est);
      csv.row({s.algorithm_id(), spec.name(),
               precipice::format_double(est.point),
               precipice::format_double(est.lower),
               precipice::format_double(est.upper),
               precipice::ci_method_name(est.method),
               precipice::format_double(est.nominal_coverage),
               std::to_string(est.replicates), std::to_string(est.seed)});
    }
    metrics[s.algorithm_id()] = std::move(per_metric);
  }
  report["algorithms"] = algorithms;
  report["metrics"] = metrics;

  const fs::path dir = ensure_out_dir(opts.common);
  if (wants(opts.common, "json")) {
    precipice::write_text_file(dir / "metrics_report.json",
                               report.dump(2) + "\n");
  }
  if (wants(opts.common, "csv")) {
    precipice::write_text_file(dir / "metrics.csv", csv.text());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareOptions {
  CommonOptions common;
  std::string x_id;
  std::string y_id;
  std::size_t replicates = 2000;
  double coverage = 0.95;
};

int run_compare(const CompareOptions& opts) {
  check_bootstrap_flags(opts.coverage, opts.replicates);
  const auto sets = load_inputs(opts.common);
  const auto find = [&](const std::string& id) -> const precipice::ScoreSet& {
    for (const auto& s : sets) {
      if (s.algorithm_id() == id) return s;
    }
    throw precipice::ConfigError("no algorithm '" + id + "' in the inputs");
  };
  const precipice::ScoreSet* x = nullptr;
  const precipice::ScoreSet* y = nullptr;
  if (!opts.x_id.empty() || !opts.y_id.empty()) {
    if (opts.x_id.empty() || opts.y_id.empty()) {
      throw precipice::ConfigError("--x and --y must be given together");
    }
    x = &find(opts.x_id);
    y = &find(opts.y_id);
  } else if (sets.size() == 2) {
    x = &sets[0];
    y = &sets[1];
  } else {
    throw precipice::ConfigError(
        "compare needs exactly two algorithms or explicit --x/--y");
  }

  // Stratified bootstrap over both algorithms' runs; replicate b resamples
  // x and y from the same substream.
  const std::uint64_t seed = opts.common.seed;
  const double point = precipice::probability_of_improvement(*x, *y);
  std::vector<double> dist(opts.replicates);
  const precipice::ResampleStrategy strategy;
  precipice::detail::parallel_for_index(
      opts.replicates, opts.common.threads, [&](std::size_t b) {
        precipice::Philox rng(seed, b);
        const auto xb = precipice::stratified_resample(*x, strategy, rng);
        const auto yb = precipice::stratified_resample(*y, strategy, rng);
        dist[b] = precipice::probability_of_improvement(xb, yb);
      });
  std::sort(dist.begin(), dist.end());
  const double alpha = (1.0 - opts.coverage) / 2.0;
  precipice::IntervalEstimate p_xy;
  p_xy.point = point;
  p_xy.lower = precipice::quantile_sorted(dist, alpha);
  p_xy.upper = precipice::quantile_sorted(dist, 1.0 - alpha);
  p_xy.nominal_coverage = opts.coverage;
  p_xy.method = precipice::CiMethod::percentile;
  p_xy.replicates = opts.replicates;
  p_xy.seed = seed;

  precipice::IntervalEstimate p_yx = p_xy;
  p_yx.point = 1.0 - p_xy.point;
  p_yx.lower = 1.0 - p_xy.upper;
  p_yx.upper = 1.0 - p_xy.lower;

  const bool significant = p_xy.point > 0.5 && p_xy.lower > 0.5;
  const bool meaningful = p_xy.upper > 0.75;

  ordered_json report =
      precipice::report_header("compare", input_paths(opts.common));
  report["settings"] = {{"replicates", opts.replicates},
                        {"nominal_coverage", opts.coverage},
                        {"seed", seed}};
  report["comparison"] = {
      {"x", x->algorithm_id()},
      {"y", y->algorithm_id()},
      {"p_x_better", precipice::interval_to_json(p_xy)},
      {"p_y_better", precipice::interval_to_json(p_yx)},
      {"statistically_significant", significant},
      {"statistically_meaningful", meaningful},
  };

  precipice::CsvWriter csv({"direction", "point", "lower", "upper", "method",
                            "nominal_coverage", "replicates", "seed",
                            "statistically_significant",
                            "statistically_meaningful"});
  const auto emit = [&](const std::string& direction,
                        const precipice::IntervalEstimate& est) {
    csv.row({direction, precipice::format_double(est.point),
             precipice::format_double(est.lower),
             precipice::format_double(est.upper),
             precipice::ci_method_name(est.method),
             precipice::format_double(est.nominal_coverage),
             std::to_string(est.replicates), std::to_string(est.seed),
             significant ? "true" : "false", meaningful ? "true" : "false"});
  };
  emit("P(" + x->algorithm_id() + ">" + y->algorithm_id() + ")", p_xy);
  emit("P(" + y->algorithm_id() + ">" + x->algorithm_id() + ")", p_yx);

  const fs::path dir = ensure_out_dir(opts.common);
  if (wants(opts.common, "json")) {
    precipice::write_text_file(dir / "compare_report.json",
                               report.dump(2) + "\n");
  }
  if (wants(opts.common, "csv")) {
    precipice::write_text_file(dir / "compare.csv", csv.text());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// profile

struct ProfileOptions {
  CommonOptions common;
  std::string grid;  // "min:max:count", else the jump-complete default grid
  bool bands = true;
  bool rescale_axis = false;
  std::size_t replicates = 2000;
  double coverage = 0.95;
};

std::vector<double> parse_grid(const std::string& text) {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
  char sep1 = 0, sep2 = 0;
  std::istringstream in(text);
  in >> lo >> sep1 >> hi >> sep2 >> count;
  if (!in || sep1 != ':' || sep2 != ':' || count < 2 || !(hi > lo)) {
    throw precipice::ConfigError("bad --grid; expected min:max:count");
  }
  std::vector<double> taus;
  taus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    taus.push_back(lo + (hi - lo) * static_cast<double>(i) /
                            static_cast<double>(count - 1));
  }
  return taus;
}

int run_profile(const ProfileOptions& opts) {
  check_bootstrap_flags(opts.coverage, opts.bands ? opts.replicates : 10);
  const auto sets = load_inputs(opts.common);
  std::vector<double> taus;
  if (!opts.grid.empty()) {
    taus = parse_grid(opts.grid);
  } else {
    std::vector<const precipice::ScoreSet*> ptrs;
    ptrs.reserve(sets.size());
    for (const auto& s : sets) ptrs.push_back(&s);
    taus = precipice::default_tau_grid(ptrs);
  }

  std::vector<precipice::svg::LabeledProfile> curves;
  curves.reserve(sets.size());
  for (const auto& s : sets) {
    precipice::ProfileCurve curve;
    if (opts.bands) {
      curve = precipice::profile_with_bands(
          s, taus, opts.coverage, opts.replicates,
          algorithm_seed(opts.common.seed, s.algorithm_id()),
          precipice::ProfileKind::run_scores, opts.common.threads);
    } else {
      curve = precipice::run_score_distribution(s, taus);
    }
    curve.validate();
    curves.push_back({s.algorithm_id(), std::move(curve)});
  }

  std::vector<double> axis_coords;
  if (opts.rescale_axis) {
    std::vector<precipice::ProfileCurve> plain;
    plain.reserve(curves.size());
    for (const auto& c : curves) plain.push_back(c.curve);
    axis_coords = precipice::rescaled_tau_axis(plain);
  }

  ordered_json report =
      precipice::report_header("profile", input_paths(opts.common));
  report["settings"] = {{"bands", opts.bands},
                        {"rescale_axis", opts.rescale_axis},
                        {"replicates", opts.replicates},
                        {"nominal_coverage", opts.coverage},
                        {"seed", opts.common.seed},
                        {"grid", opts.grid.empty() ? "auto" : opts.grid}};
  ordered_json profiles = ordered_json::object();
  for (const auto& c : curves) {
    ordered_json entry{{"kind", "run_scores"},
                       {"tau", c.curve.taus},
                       {"value", c.curve.values}};
    if (c.curve.has_bands()) {
      entry["lower"] = *c.curve.lower;
      entry["upper"] = *c.curve.upper;
    }
    profiles[c.label] = std::move(entry);
  }
  report["profiles"] = profiles;
  if (opts.rescale_axis) {
    report["rescaled_axis"] = {{"tau", taus}, {"coordinate", axis_coords}};
  }

  const fs::path dir = ensure_out_dir(opts.common);
  if (wants(opts.common, "json")) {
    precipice::write_text_file(dir / "profile_report.json",
                               report.dump(2) + "\n");
  }
  if (wants(opts.common, "csv")) {
    for (const auto& c : curves) {
      std::vector<std::string> columns = {"tau", "value"};
      if (c.curve.has_bands()) {
        columns.push_back("lower");
        columns.push_back("upper");
      }
      precipice::CsvWriter csv(columns);
      for (std::size_t i = 0; i < c.curve.taus.size(); ++i) {
        std::vector<std::string> cells = {
            precipice::format_double(c.curve.taus[i]),
            precipice::format_double(c.curve.values[i])};
        if (c.curve.has_bands()) {
          cells.push_back(precipice::format_double((*c.curve.lower)[i]));
          cells.push_back(precipice::format_double((*c.curve.upper)[i]));
        }
        csv.row(cells);
      }
      precipice::write_text_file(
          dir / ("profile_" + precipice::sanitize_filename(c.label) + ".csv"),
          csv.text());
    }
  }
  if (wants(opts.common, "svg")) {
    precipice::svg::ProfileSvgOptions svg_opts;
    svg_opts.axis_coords = axis_coords;
    precipice::write_text_file(dir / "profile.svg",
                               precipice::svg::render_profile_svg(curves, svg_opts));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// ranks

struct RanksOptions {
  CommonOptions common;
  std::size_t replicates = 200000;
};

int run_ranks(const RanksOptions& opts) {
  const auto sets = load_inputs(opts.common);
  if (sets.size() < 2) {
    throw precipice::ConfigError("ranks needs at least two algorithms");
  }
  const auto ranks = precipice::rank_distribution(
      sets, opts.replicates, opts.common.seed, opts.common.threads);

  ordered_json report =
      precipice::report_header("ranks", input_paths(opts.common));
  report["settings"] = {{"replicates", opts.replicates},
                        {"seed", opts.common.seed}};
  ordered_json per_task = ordered_json::object();
  for (std::size_t t = 0; t < ranks.tasks.size(); ++t) {
    per_task[ranks.tasks[t]] = ranks.per_task[t];
  }
  report["ranks"] = {{"algorithms", ranks.algorithms},
                     {"tasks", ranks.tasks},
                     {"mean_matrix", ranks.mean_matrix},
                     {"per_task", per_task}};

  precipice::CsvWriter csv({"scope", "algorithm", "rank", "probability"});
  for (std::size_t a = 0; a < ranks.algorithms.size(); ++a) {
    for (std::size_t r = 0; r < ranks.algorithms.size(); ++r) {
      csv.row({"mean", ranks.algorithms[a], std::to_string(r + 1),
               precipice::format_double(ranks.mean_matrix[a][r])});
    }
  }
  for (std::size_t t = 0; t < ranks.tasks.size(); ++t) {
    for (std::size_t a = 0; a < ranks.algorithms.size(); ++a) {
      for (std::size_t r = 0; r < ranks.algorithms.size(); ++r) {
        csv.row({ranks.tasks[t], ranks.algorithms[a], std::to_string(r + 1),
                 precipice::format_double(ranks.per_task[t][a][r])});
      }
    }
  }

  const fs::path dir = ensure_out_dir(opts.common);
  if (wants(opts.common, "json")) {
    precipice::write_text_file(dir / "ranks_report.json", report.dump(2) + "\n");
  }
  if (wants(opts.common, "csv")) {
    precipice::write_text_file(dir / "ranks.csv", csv.text());
  }
  if (wants(opts.common, "svg")) {
    precipice::write_text_file(dir / "ranks.svg",
                               precipice::svg::render_ranks_svg(ranks));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateOptions {
  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 1;
  std::vector<std::string> formats = {"json", "csv"};
};

int run_validate(const ValidateOptions& opts) {
  std::ifstream in(opts.config_path, std::ios::binary);
  if (!in) {
    throw precipice::ParseError("cannot open config '" + opts.config_path + "'");
  }
  ordered_json config;
  try {
    config = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw precipice::ConfigError(std::string("config parse error: ") + e.what());
  }
  const fs::path base_dir = fs::path(opts.config_path).parent_path();
  const auto report = precipice::run_experiment(config, base_dir, opts.threads);

  fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw precipice::ParseError("cannot create output directory '" +
                                dir.string() + "'");
  }
  const auto wants_format = [&](std::string_view f) {
    for (const auto& g : opts.formats) {
      if (g == f) return true;
    }
    return false;
  };
  if (wants_format("json")) {
    precipice::write_text_file(
        dir / "validate_report.json",
        precipice::experiment_report_json(report).dump(2) + "\n");
  }
  if (wants_format("csv")) {
    for (const auto& table : report.tables) {
      precipice::write_text_file(
          dir / (report.kind + "_" + table.name + ".csv"),
          precipice::experiment_table_csv(table));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistically rigorous benchmark evaluation"};
  app.set_version_flag("--version",
                       std::string(precipice::kToolName) + " " +
                           precipice::kToolVersion);
  app.require_subcommand(1);

  MetricsOptions metrics_opts;
  CLI::App* metrics = app.add_subcommand(
      "metrics", "Aggregate metrics with bootstrap confidence intervals");
  add_common(metrics, metrics_opts.common, {"json", "csv"});
  metrics->add_option("--metrics", metrics_opts.metrics,
                      "Comma-separated metric list (mean, median, iqm, "
                      "optimality_gap, difficulty_progress, superhuman_prob)");
  metrics->add_option("--ci-method", metrics_opts.ci_method,
                      "percentile | basic | bc | bca");
  metrics->add_option("--coverage", metrics_opts.coverage, "Nominal coverage");
  metrics->add_option("--replicates", metrics_opts.replicates,
                      "Bootstrap replicates");
  metrics->add_option("--strategy", metrics_opts.strategy,
                      "runs | tasks-and-runs");
  metrics->add_option("--subsample", metrics_opts.subsample,
                      "m/n bootstrap subsample size (0 = ceil(minN/2))");
  metrics->add_option("--trim-fraction", metrics_opts.trim_fraction,
                      "Trim fraction for iqm/difficulty_progress");
  metrics->add_option("--gamma", metrics_opts.gamma,
                      "Threshold for optimality_gap/superhuman_prob");

  CompareOptions compare_opts;
  CLI::App* compare = app.add_subcommand(
      "compare", "Probability of improvement P(X > Y) with bootstrap CI");
  add_common(compare, compare_opts.common, {"json", "csv"});
  compare->add_option("--x", compare_opts.x_id, "Algorithm id for X");
  compare->add_option("--y", compare_opts.y_id, "Algorithm id for Y");
  compare->add_option("--replicates", compare_opts.replicates,
                      "Bootstrap replicates");
  compare->add_option("--coverage", compare_opts.coverage, "Nominal coverage");

  ProfileOptions profile_opts;
  CLI::App* profile = app.add_subcommand(
      "profile", "Run-score distributions with confidence bands");
  add_common(profile, profile_opts.common, {"json", "csv", "svg"});
  profile->add_option("--grid", profile_opts.grid,
                      "Threshold grid min:max:count (default: all jumps)");
  profile->add_flag("--bands,!--no-bands", profile_opts.bands,
                    "Pointwise confidence bands (default on)");
  profile->add_flag("--rescale-axis", profile_opts.rescale_axis,
                    "Space tau by the fraction of runs between thresholds");
  profile->add_option("--replicates", profile_opts.replicates,
                      "Band bootstrap replicates");
  profile->add_option("--coverage", profile_opts.coverage, "Nominal coverage");

  RanksOptions ranks_opts;
  CLI::App* ranks =
      app.add_subcommand("ranks", "Bootstrap rank distributions per task");
  add_common(ranks, ranks_opts.common, {"json", "csv", "svg"});
  ranks->add_option("--replicates", ranks_opts.replicates,
                    "Bootstrap replicates");

  ValidateOptions validate_opts;
  CLI::App* validate = app.add_subcommand(
      "validate", "Monte Carlo estimator-validation experiments");
  validate->add_option("--config", validate_opts.config_path,
                       "Experiment config JSON")
      ->required();
  validate->add_option("--out", validate_opts.out_dir, "Output directory");
  validate->add_option("--threads", validate_opts.threads, "Worker threads");
  validate->add_option("--format", validate_opts.formats,
                       "Artifact formats: json, csv")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(metrics)) return run_metrics(metrics_opts);
    if (app.got_subcommand(compare)) return run_compare(compare_opts);
    if (app.got_subcommand(profile)) return run_profile(profile_opts);
    if (app.got_subcommand(ranks)) return run_ranks(ranks_opts);
    if (app.got_subcommand(validate)) return run_validate(validate_opts);
  } catch (const precipice::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
