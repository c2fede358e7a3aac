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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "precipice/aggregates.hpp"
#include "test_support.hpp"

using namespace precipice;
using testsupport::random_matching_set;
using testsupport::random_score_set;

namespace {

ScoreSet from_pooled(std::vector<double> values) {
  return ScoreSet("A", {"t1"}, {std::move(values)});
}

}  // namespace

TEST_CASE("mean and median of task means") {
  const ScoreSet two("A", {"t1", "t2"}, {{0.2}, {0.4}});
  CHECK(mean_of_task_means(two) == doctest::Approx(0.3));
  const ScoreSet single("A", {"t1"}, {{1.0, 2.0}});
  CHECK(mean_of_task_means(single) == doctest::Approx(1.5));

  // one outlier task dominates the mean
  const ScoreSet outlier("A", {"t1", "t2", "t3"}, {{0.0}, {0.0}, {100.0}});
  CHECK(mean_of_task_means(outlier) == doctest::Approx(100.0 / 3.0));

  const ScoreSet odd("A", {"t1", "t2", "t3"}, {{0.2}, {0.4}, {0.9}});
  CHECK(median_of_task_means(odd) == doctest::Approx(0.4));
  const ScoreSet even("A", {"t1", "t2", "t3", "t4"},
                      {{0.2}, {0.4}, {0.6}, {0.9}});
  CHECK(median_of_task_means(even) == doctest::Approx(0.5));

  // zero scores on two of five tasks leave the median untouched
  const ScoreSet zeros("A", {"t1", "t2", "t3", "t4", "t5"},
                       {{0.0}, {0.0}, {1.0}, {1.0}, {1.0}});
  CHECK(median_of_task_means(zeros) == 1.0);
}

TEST_CASE("iqm drops the tails of the pooled runs") {
  CHECK(iqm(from_pooled({0, 1, 2, 3}), 0.25) == doctest::Approx(1.5));
  CHECK(iqm(from_pooled({0.1, 0.1, 0.1, 100.0}), 0.25) ==
        doctest::Approx(0.1));
  const auto pooled = from_pooled({3.0, -1.0, 7.0, 2.5, 0.0});
  CHECK(iqm(pooled, 0.0) == doctest::Approx(mean_of_task_means(pooled)));
  CHECK_THROWS_AS(iqm(pooled, 0.5), ValidationError);
  CHECK_THROWS_AS(iqm(pooled, -0.1), ValidationError);
}

TEST_CASE("optimality gap") {
  CHECK(optimality_gap(from_pooled({1.0, 2.0, 3.0}), 1.0) == 0.0);
  CHECK(optimality_gap(from_pooled({0.5, 1.5}), 1.0) == doctest::Approx(0.25));
  // all scores within [0, gamma]: gap == gamma - mean
  const auto s = from_pooled({0.1, 0.4, 0.9, 0.7});
  CHECK(optimality_gap(s, 1.0) ==
        doctest::Approx(1.0 - mean_of_task_means(s)));
}

TEST_CASE("optimality gap curve divides by gamma") {
  const auto constant = from_pooled({5.0, 5.0});
  for (const auto& [g, v] : optimality_gap_curve(constant, {1.0, 2.0, 5.0})) {
    CHECK(v == 0.0);
  }
  const auto zeros = from_pooled({0.0});
  const auto curve = optimality_gap_curve(zeros, {2.0});
  CHECK(curve[0].second == doctest::Approx(1.0));

  const auto two = from_pooled({0.5, 1.5});
  const auto c2 = optimality_gap_curve(two, {1.0, 2.0});
  CHECK(c2[0].second == doctest::Approx(0.25));
  CHECK(c2[1].second == doctest::Approx(0.5));

  CHECK_THROWS_AS(optimality_gap_curve(two, {0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(optimality_gap_curve(two, {2.0, 1.0}), ValidationError);
}

TEST_CASE("probability of improvement examples") {
  const ScoreSet x("X", {"t1"}, {{2.0}});
  const ScoreSet y("Y", {"t1"}, {{1.0}});
  CHECK(probability_of_improvement(x, y) == 1.0);
  CHECK(probability_of_improvement(y, x) == 0.0);

  const ScoreSet same("X", {"t1", "t2"}, {{1.0, 2.0}, {0.5}});
  CHECK(probability_of_improvement(same, rename_algorithm(same, "Y")) == 0.5);

  const ScoreSet a("X", {"t1"}, {{1.0, 3.0}});
  const ScoreSet b("Y", {"t1"}, {{2.0, 2.0}});
  CHECK(probability_of_improvement(a, b) == 0.5);

  const ScoreSet mismatched("Y", {"t9"}, {{1.0}});
  CHECK_THROWS_AS(probability_of_improvement(x, mismatched), ValidationError);
}

TEST_CASE("probability of improvement matches tasks by name, not position") {
  const ScoreSet x("X", {"t1", "t2"}, {{1.0}, {10.0}});
  const ScoreSet y("Y", {"t2", "t1"}, {{0.0}, {5.0}});
  // t1: 1 vs 5 -> 0; t2: 10 vs 0 -> 1
  CHECK(probability_of_improvement(x, y) == 0.5);
}

TEST_CASE("probability of improvement complements sum to one exactly") {
  Philox rng(31, 0);
  testsupport::RandomSetOptions opts;
  opts.quantize_half = true;  // force ties
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = random_score_set(rng, opts, "X");
    const auto y = random_matching_set(rng, x, opts, "Y");
    const double pxy = probability_of_improvement(x, y);
    const double pyx = probability_of_improvement(y, x);
    CHECK(pxy + pyx == 1.0);
    CHECK(pxy >= 0.0);
    CHECK(pxy <= 1.0);
  }
}

TEST_CASE("probability of improvement ignores monotone rescaling") {
  Philox rng(32, 0);
  testsupport::RandomSetOptions opts;
  opts.quantize_half = true;
  const auto transform = [](const ScoreSet& s) {
    std::vector<std::vector<double>> runs = s.all_runs();
    for (auto& row : runs) {
      for (double& v : row) v = std::atan(v / 3.0);
    }
    return ScoreSet(s.algorithm_id(), s.tasks(), std::move(runs));
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_score_set(rng, opts, "X");
    const auto y = random_matching_set(rng, x, opts, "Y");
    CHECK(probability_of_improvement(x, y) ==
          probability_of_improvement(transform(x), transform(y)));
  }
}

TEST_CASE("difficulty progress") {
  CHECK(difficulty_progress(from_pooled({1, 2, 3, 4}), 0.25) == 1.0);
  CHECK(difficulty_progress(from_pooled({2.5, 2.5, 2.5}), 0.25) == 2.5);
  CHECK(difficulty_progress(from_pooled({1, 2, 3, 4, 5}), 0.25) ==
        doctest::Approx(1.5));  // ceil(1.25) = 2 smallest
  CHECK_THROWS_AS(difficulty_progress(from_pooled({1.0}), 0.0),
                  ValidationError);
}

TEST_CASE("superhuman probability uses strict inequality") {
  CHECK(superhuman_probability(from_pooled({0.5, 1.5})) == 0.5);
  CHECK(superhuman_probability(from_pooled({1.0, 1.0})) == 0.0);
  CHECK(superhuman_probability(from_pooled({2.0, 2.0})) == 1.0);
}

TEST_CASE("iqm stays within the pooled range and is monotone") {
  Philox rng(33, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_score_set(rng);
    auto pooled = pooled_scores(s);
    const double lo = *std::min_element(pooled.begin(), pooled.end());
    const double hi = *std::max_element(pooled.begin(), pooled.end());
    const double v = iqm(s);
    CHECK(v >= lo - 1e-12);
    CHECK(v <= hi + 1e-12);

    // permutation invariance: reverse every task's runs and the task order
    std::vector<std::string> tasks(s.tasks().rbegin(), s.tasks().rend());
    std::vector<std::vector<double>> runs;
    for (std::size_t m = s.task_count(); m-- > 0;) {
      std::vector<double> row(s.runs(m).rbegin(), s.runs(m).rend());
      runs.push_back(std::move(row));
    }
    CHECK(iqm(ScoreSet("A", tasks, runs)) == v);

    // raising one run never lowers the iqm
    auto raised = s.all_runs();
    const std::size_t m = rng.next_index(s.task_count());
    const std::size_t i = rng.next_index(s.run_count(m));
    raised[m][i] += 1.0 + 5.0 * rng.next_double();
    CHECK(iqm(ScoreSet("A", s.tasks(), raised)) >= v - 1e-12);
  }
}

TEST_CASE("iqm has bounded outlier influence where the mean does not") {
  // K = 8 pooled runs: one run pushed to 1e3 and then 1e9 changes the
  // trimmed region not at all, while the mean moves arbitrarily.
  std::vector<double> base = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 1000.0};
  const double iqm_small = iqm(from_pooled(base));
  const double mean_small = mean_of_task_means(from_pooled(base));
  base.back() = 1e9;
  const double iqm_large = iqm(from_pooled(base));
  const double mean_large = mean_of_task_means(from_pooled(base));
  CHECK(iqm_large == iqm_small);
  CHECK(mean_large - mean_small > 1e8);
}

TEST_CASE("all aggregates agree on constant data") {
  const ScoreSet c("A", {"t1", "t2"}, {{0.4, 0.4, 0.4}, {0.4}});
  CHECK(mean_of_task_means(c) == 0.4);
  CHECK(median_of_task_means(c) == 0.4);
  CHECK(iqm(c) == 0.4);
  CHECK(optimality_gap(c, 1.0) == doctest::Approx(0.6));
  CHECK(optimality_gap(c, 0.2) == 0.0);
  CHECK(difficulty_progress(c) == 0.4);
}

TEST_CASE("optimality gap monotonicity") {
  Philox rng(34, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_score_set(rng);
    const double g1 = optimality_gap(s, 1.0);
    // non-decreasing in gamma
    CHECK(optimality_gap(s, 2.0) >= g1);
    // non-increasing as any score increases
    auto raised = s.all_runs();
    const std::size_t m = rng.next_index(s.task_count());
    raised[m][0] += 3.0;
    CHECK(optimality_gap(ScoreSet("A", s.tasks(), raised), 1.0) <= g1 + 1e-12);
  }
}

TEST_CASE("aggregates match naive references on random inputs") {
  Philox rng(35, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_score_set(rng);
    CHECK(mean_of_task_means(s) ==
          doctest::Approx(testsupport::ref_mean_of_task_means(s)).epsilon(1e-13));
    CHECK(median_of_task_means(s) ==
          doctest::Approx(testsupport::ref_median_of_task_means(s)).epsilon(1e-13));
    CHECK(iqm(s) == doctest::Approx(testsupport::ref_iqm(s)).epsilon(1e-13));
    CHECK(optimality_gap(s) ==
          doctest::Approx(testsupport::ref_optimality_gap(s)).epsilon(1e-13));
  }
}

TEST_CASE("metric registry") {
  const auto specs = parse_metric_list("iqm, median,mean,optimality_gap");
  REQUIRE(specs.size() == 4);
  CHECK(specs[0].name() == "iqm");
  CHECK(specs[3].name() == "optimality_gap");
  CHECK_THROWS_AS(parse_metric_list("iqm,unknown"), ConfigError);
  CHECK_THROWS_AS(parse_metric_list(""), ConfigError);
  CHECK_THROWS_AS(MetricSpec::parse("iqm", 0.7), ConfigError);

  const ScoreSet s("A", {"t1"}, {{0.0, 1.0, 2.0, 3.0}});
  CHECK(make_statistic(MetricSpec::parse("iqm"))(s) == doctest::Approx(1.5));
  CHECK(make_statistic(MetricSpec::parse("superhuman_prob"))(s) ==
        doctest::Approx(0.5));
}
