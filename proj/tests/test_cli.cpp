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

// End-to-end checks against the built binary. The test runner passes the
// binary location as --cli=<path>.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <unistd.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string g_cli_path;
fs::path g_work;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const fs::path out_file = g_work / "stdout.txt";
  const fs::path err_file = g_work / "stderr.txt";
  std::string command = env.empty() ? "" : env + " ";
  command += "\"" + g_cli_path + "\" " + args + " > \"" + out_file.string() +
             "\" 2> \"" + err_file.string() + "\"";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = read_file(out_file);
  result.err = read_file(err_file);
  return result;
}

const char* kTwoAlgorithms = R"([
  {"alg": "alpha", "scores": {"t1": [0.2, 0.4, 0.6], "t2": [0.8, 1.0, 1.2]}},
  {"alg": "beta",  "scores": {"t1": [0.1, 0.3, 0.5], "t2": [0.7, 0.9, 1.1]}}
])";

}  // namespace

TEST_CASE("metrics: report shape, exit code, determinism") {
  const fs::path input = g_work / "scores.json";
  write_file(input, kTwoAlgorithms);

  const std::string base_args =
      "metrics --input \"" + input.string() +
      "\" --replicates 500 --seed 42 --out \"";
  const fs::path dir1 = g_work / "m1";
  const fs::path dir2 = g_work / "m2";
  auto r1 = run_cli(base_args + dir1.string() + "\"");
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli(base_args + dir2.string() + "\"");
  REQUIRE(r2.exit_code == 0);

  const std::string report_text = read_file(dir1 / "metrics_report.json");
  CHECK(report_text == read_file(dir2 / "metrics_report.json"));
  CHECK(read_file(dir1 / "metrics.csv") == read_file(dir2 / "metrics.csv"));

  const auto report = ordered_json::parse(report_text);
  CHECK(report.at("schema_version").get<int>() == 1);
  CHECK(report.at("command") == "metrics");
  REQUIRE(report.at("algorithms").size() == 2);
  CHECK(report.at("algorithms")[0] == "alpha");  // file order preserved
  const auto& metrics = report.at("metrics");
  for (const auto& alg : {"alpha", "beta"}) {
    REQUIRE(metrics.contains(alg));
    for (const auto& name : {"median", "iqm", "mean", "optimality_gap"}) {
      const auto& cell = metrics.at(alg).at(name);
      CHECK(cell.at("lower").get<double>() <= cell.at("upper").get<double>());
      CHECK(cell.at("replicates").get<int>() == 500);
      CHECK(cell.at("method") == "percentile");
    }
  }
  // 2 algorithms x 4 metrics + header
  std::istringstream csv(read_file(dir1 / "metrics.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 9);
}

TEST_CASE("metrics: seed environment fallback loses to the flag") {
  const fs::path input = g_work / "scores_env.json";
  write_file(input, kTwoAlgorithms);
  const auto with_flag = run_cli("metrics --input \"" + input.string() +
                                 "\" --replicates 200 --seed 5 --out \"" +
                                 (g_work / "e1").string() + "\"");
  const auto with_env = run_cli("metrics --input \"" + input.string() +
                                    "\" --replicates 200 --out \"" +
                                    (g_work / "e2").string() + "\"",
                                "PRECIPICE_SEED=5");
  const auto env_and_flag = run_cli("metrics --input \"" + input.string() +
                                        "\" --replicates 200 --seed 5 --out \"" +
                                        (g_work / "e3").string() + "\"",
                                    "PRECIPICE_SEED=7");
  REQUIRE(with_flag.exit_code == 0);
  REQUIRE(with_env.exit_code == 0);
  REQUIRE(env_and_flag.exit_code == 0);
  const auto a = read_file(g_work / "e1" / "metrics_report.json");
  CHECK(a == read_file(g_work / "e2" / "metrics_report.json"));
  CHECK(a == read_file(g_work / "e3" / "metrics_report.json"));
}

TEST_CASE("metrics: error contracts") {
  const fs::path input = g_work / "scores_err.json";
  write_file(input, kTwoAlgorithms);
  // unknown metric -> usage error 2
  CHECK(run_cli("metrics --input \"" + input.string() +
                "\" --metrics iqm,bogus --replicates 100 --out \"" +
                (g_work / "x1").string() + "\"")
            .exit_code == 2);
  // missing file -> io error 1
  CHECK(run_cli("metrics --input \"" + (g_work / "absent.json").string() +
                "\" --replicates 100 --out \"" + (g_work / "x2").string() +
                "\"")
            .exit_code == 1);
  // malformed json -> io/parse error 1
  const fs::path broken = g_work / "broken.json";
  write_file(broken, "{\"alg\": ");
  CHECK(run_cli("metrics --input \"" + broken.string() +
                "\" --replicates 100 --out \"" + (g_work / "x3").string() +
                "\"")
            .exit_code == 1);
  // no subcommand -> usage error 2
  CHECK(run_cli("").exit_code == 2);
  // out-of-range coverage -> usage error 2
  CHECK(run_cli("metrics --input \"" + input.string() +
                "\" --coverage 1.5 --replicates 100 --out \"" +
                (g_work / "x4").string() + "\"")
            .exit_code == 2);
}

TEST_CASE("metrics: normalization file is applied") {
  const fs::path input = g_work / "raw.json";
  write_file(input, R"({"alg":"A","scores":{"t1":[50,150]}})");
  const fs::path norm = g_work / "norm.json";
  write_file(norm, R"({"t1":{"low":50,"high":150}})");
  const fs::path dir = g_work / "norm_out";
  const auto r = run_cli("metrics --input \"" + input.string() +
                         "\" --normalize \"" + norm.string() +
                         "\" --metrics mean --replicates 100 --out \"" +
                         dir.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const auto report = ordered_json::parse(read_file(dir / "metrics_report.json"));
  CHECK(report.at("metrics").at("A").at("mean").at("point").get<double>() ==
        doctest::Approx(0.5));
}

TEST_CASE("compare: identical algorithms are a coin flip") {
  const fs::path input = g_work / "same.json";
  write_file(input, R"([
    {"alg":"x","scores":{"t1":[0.5,0.7],"t2":[0.9,1.0]}},
    {"alg":"y","scores":{"t1":[0.5,0.7],"t2":[0.9,1.0]}}
  ])");
  const fs::path dir = g_work / "cmp_same";
  const auto r = run_cli("compare --input \"" + input.string() +
                         "\" --replicates 200 --seed 3 --out \"" +
                         dir.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const auto report = ordered_json::parse(read_file(dir / "compare_report.json"));
  const auto& cmp = report.at("comparison");
  CHECK(cmp.at("p_x_better").at("point").get<double>() == 0.5);
  CHECK(cmp.at("statistically_significant").get<bool>() == false);
  const double pxy = cmp.at("p_x_better").at("point").get<double>();
  const double pyx = cmp.at("p_y_better").at("point").get<double>();
  CHECK(pxy + pyx == 1.0);
}

TEST_CASE("compare: strict dominance sets both flags") {
  const fs::path input = g_work / "dom.json";
  write_file(input, R"([
    {"alg":"strong","scores":{"t1":[2.0,2.1],"t2":[3.0,3.1]}},
    {"alg":"weak","scores":{"t1":[1.0,1.1],"t2":[2.0,2.1]}}
  ])");
  const fs::path dir = g_work / "cmp_dom";
  const auto r = run_cli("compare --input \"" + input.string() +
                         "\" --replicates 200 --seed 3 --out \"" +
                         dir.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const auto report = ordered_json::parse(read_file(dir / "compare_report.json"));
  const auto& cmp = report.at("comparison");
  CHECK(cmp.at("p_x_better").at("point").get<double>() == 1.0);
  CHECK(cmp.at("statistically_significant").get<bool>() == true);
  CHECK(cmp.at("statistically_meaningful").get<bool>() == true);

  // explicit --x/--y selection flips the direction
  const fs::path dir2 = g_work / "cmp_flip";
  const auto r2 = run_cli("compare --input \"" + input.string() +
                          "\" --x weak --y strong --replicates 200 --seed 3 "
                          "--out \"" + dir2.string() + "\"");
  REQUIRE(r2.exit_code == 0);
  const auto flipped =
      ordered_json::parse(read_file(dir2 / "compare_report.json"));
  CHECK(flipped.at("comparison").at("p_x_better").at("point").get<double>() ==
        0.0);
}

TEST_CASE("compare: task mismatch is a data error") {
  const fs::path input = g_work / "mismatch.json";
  write_file(input, R"([
    {"alg":"x","scores":{"t1":[1.0]}},
    {"alg":"y","scores":{"t2":[1.0]}}
  ])");
  CHECK(run_cli("compare --input \"" + input.string() +
                "\" --replicates 100 --out \"" + (g_work / "cmp_err").string() +
                "\"")
            .exit_code == 1);
}

TEST_CASE("profile: csv schema follows the bands flag") {
  const fs::path input = g_work / "prof.json";
  write_file(input, R"({"alg":"A","scores":{"t1":[0.5,0.5],"t2":[0.5,0.5]}})");
  const fs::path dir1 = g_work / "prof_bands";
  auto r = run_cli("profile --input \"" + input.string() +
                   "\" --replicates 100 --seed 1 --out \"" + dir1.string() +
                   "\"");
  REQUIRE(r.exit_code == 0);
  const std::string with_bands = read_file(dir1 / "profile_A.csv");
  CHECK(with_bands.substr(0, with_bands.find('\n')) == "tau,value,lower,upper");

  const fs::path dir2 = g_work / "prof_plain";
  r = run_cli("profile --input \"" + input.string() +
              "\" --no-bands --seed 1 --out \"" + dir2.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const std::string plain = read_file(dir2 / "profile_A.csv");
  CHECK(plain.substr(0, plain.find('\n')) == "tau,value");

  // constant scores: a single step from 1 to 0 at the score
  const auto report =
      ordered_json::parse(read_file(dir2 / "profile_report.json"));
  const auto& values = report.at("profiles").at("A").at("value");
  REQUIRE(values.size() == 3);  // grid: below, at score, above
  CHECK(values[0].get<double>() == 1.0);
  CHECK(values[1].get<double>() == 0.0);
  CHECK(values[2].get<double>() == 0.0);
}

TEST_CASE("profile: svg data attributes equal the csv sidecar") {
  const fs::path input = g_work / "prof2.json";
  write_file(input, kTwoAlgorithms);
  const fs::path dir = g_work / "prof_svg";
  const auto r = run_cli("profile --input \"" + input.string() +
                         "\" --replicates 60 --seed 9 --out \"" + dir.string() +
                         "\"");
  REQUIRE(r.exit_code == 0);
  const std::string svg_text = read_file(dir / "profile.svg");

  for (const std::string alg : {"alpha", "beta"}) {
    const std::string csv_text = read_file(dir / ("profile_" + alg + ".csv"));
    std::istringstream csv(csv_text);
    std::string line;
    std::getline(csv, line);  // header
    std::string taus, values, lowers, uppers;
    while (std::getline(csv, line)) {
      std::istringstream row(line);
      std::string tau, value, lower, upper;
      std::getline(row, tau, ',');
      std::getline(row, value, ',');
      std::getline(row, lower, ',');
      std::getline(row, upper, ',');
      taus += (taus.empty() ? "" : " ") + tau;
      values += (values.empty() ? "" : " ") + value;
      lowers += (lowers.empty() ? "" : " ") + lower;
      uppers += (uppers.empty() ? "" : " ") + upper;
    }
    const std::string marker = "data-algorithm=\"" + alg + "\"";
    REQUIRE(svg_text.find(marker) != std::string::npos);
    CHECK(svg_text.find("data-taus=\"" + taus + "\"") != std::string::npos);
    CHECK(svg_text.find("data-values=\"" + values + "\"") != std::string::npos);
    CHECK(svg_text.find("data-lower=\"" + lowers + "\"") != std::string::npos);
    CHECK(svg_text.find("data-upper=\"" + uppers + "\"") != std::string::npos);
  }
}

TEST_CASE("profile: explicit grid flag") {
  const fs::path input = g_work / "prof_grid.json";
  write_file(input, kTwoAlgorithms);
  const fs::path dir = g_work / "prof_grid_out";
  const auto r = run_cli("profile --input \"" + input.string() +
                         "\" --no-bands --grid 0:2:5 --out \"" + dir.string() +
                         "\"");
  REQUIRE(r.exit_code == 0);
  const auto report =
      ordered_json::parse(read_file(dir / "profile_report.json"));
  const auto taus = report.at("profiles").at("alpha").at("tau");
  REQUIRE(taus.size() == 5);
  CHECK(taus[0].get<double>() == 0.0);
  CHECK(taus[2].get<double>() == 1.0);
  CHECK(taus[4].get<double>() == 2.0);

  CHECK(run_cli("profile --input \"" + input.string() +
                "\" --no-bands --grid nonsense --out \"" +
                (g_work / "prof_grid_bad").string() + "\"")
            .exit_code == 2);
}

TEST_CASE("profile: rescaled axis stays within [0,1] and is monotone") {
  const fs::path input = g_work / "prof3.json";
  write_file(input, kTwoAlgorithms);
  const fs::path dir = g_work / "prof_rescale";
  const auto r = run_cli("profile --input \"" + input.string() +
                         "\" --no-bands --rescale-axis --seed 2 --out \"" +
                         dir.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const auto report =
      ordered_json::parse(read_file(dir / "profile_report.json"));
  const auto& coords = report.at("rescaled_axis").at("coordinate");
  double prev = -1.0;
  for (const auto& c : coords) {
    const double v = c.get<double>();
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("ranks: usage error below two algorithms, stochastic matrices") {
  const fs::path single = g_work / "one.json";
  write_file(single, R"({"alg":"A","scores":{"t1":[1.0,2.0]}})");
  CHECK(run_cli("ranks --input \"" + single.string() + "\" --out \"" +
                (g_work / "r0").string() + "\"")
            .exit_code == 2);

  const fs::path input = g_work / "two.json";
  write_file(input, kTwoAlgorithms);
  const fs::path dir = g_work / "ranks_out";
  const auto r = run_cli("ranks --input \"" + input.string() +
                         "\" --replicates 2000 --seed 11 --out \"" +
                         dir.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const auto report = ordered_json::parse(read_file(dir / "ranks_report.json"));
  const auto& mean = report.at("ranks").at("mean_matrix");
  for (std::size_t i = 0; i < 2; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      row += mean[i][j].get<double>();
      col += mean[j][i].get<double>();
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(col == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(fs::exists(dir / "ranks.svg"));
  CHECK(fs::exists(dir / "ranks.csv"));
}

TEST_CASE("validate: config contract and constant-pool coverage") {
  const fs::path config = g_work / "coverage.json";
  write_file(config, R"({
    "kind": "coverage",
    "pool": {"synthetic": {"tasks": 2, "pool_size": 24, "seed": 1,
             "family": {"kind": "gaussian", "mu": 1.0, "sigma": 0.0}}},
    "statistic": "iqm",
    "subsample_size": 4,
    "trials": 25,
    "ci_replicates": 40,
    "seed": 5
  })");
  const fs::path dir = g_work / "val_out";
  const auto r = run_cli("validate --config \"" + config.string() +
                         "\" --out \"" + dir.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const auto report =
      ordered_json::parse(read_file(dir / "validate_report.json"));
  CHECK(report.at("summary").at("coverage_percent").get<double>() == 100.0);
  CHECK(fs::exists(dir / "coverage_coverage.csv"));

  // missing "trials" -> exit 2, message names the key
  const fs::path broken = g_work / "broken_config.json";
  write_file(broken, R"({
    "kind": "coverage",
    "pool": {"synthetic": {"tasks": 2, "pool_size": 24, "seed": 1,
             "family": {"kind": "gaussian", "mu": 1.0, "sigma": 0.0}}},
    "statistic": "iqm",
    "subsample_size": 4,
    "seed": 5
  })");
  const auto bad = run_cli("validate --config \"" + broken.string() +
                           "\" --out \"" + (g_work / "val_bad").string() +
                           "\"");
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("trials") != std::string::npos);

  // unreadable config -> io error 1
  CHECK(run_cli("validate --config \"" + (g_work / "nope.json").string() +
                "\" --out \"" + (g_work / "val_io").string() + "\"")
            .exit_code == 1);
}

TEST_CASE("metrics: m/n bootstrap and tasks-and-runs strategy run clean") {
  const fs::path input = g_work / "mn.json";
  write_file(input, kTwoAlgorithms);
  const fs::path dir = g_work / "mn_out";
  const auto r = run_cli("metrics --input \"" + input.string() +
                         "\" --metrics iqm --replicates 200 --subsample 0 "
                         "--strategy tasks-and-runs --seed 2 --out \"" +
                         dir.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const auto report = ordered_json::parse(read_file(dir / "metrics_report.json"));
  CHECK(report.at("settings").at("strategy") == "tasks-and-runs");
  CHECK(report.at("settings").at("subsample").get<int>() == 0);
  const auto& cell = report.at("metrics").at("alpha").at("iqm");
  CHECK(cell.at("lower").get<double>() <= cell.at("upper").get<double>());
}

TEST_CASE("csv input loads like json") {
  const fs::path input = g_work / "scores.csv";
  write_file(input,
             "algorithm,task,run,score\n"
             "A,t1,0,0.2\nA,t1,1,0.4\nA,t2,0,0.8\n");
  const fs::path dir = g_work / "csv_out";
  const auto r = run_cli("metrics --input \"" + input.string() +
                         "\" --metrics mean --replicates 100 --out \"" +
                         dir.string() + "\"");
  REQUIRE(r.exit_code == 0);
  const auto report = ordered_json::parse(read_file(dir / "metrics_report.json"));
  CHECK(report.at("metrics").at("A").at("mean").at("point").get<double>() ==
        doctest::Approx(0.55));
}

int main(int argc, char** argv) {
  doctest::Context context;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--cli=", 0) == 0) g_cli_path = arg.substr(6);
  }
  if (g_cli_path.empty()) {
    std::fprintf(stderr, "usage: test_cli --cli=<path-to-binary>\n");
    return 1;
  }
  g_work = fs::temp_directory_path() /
           ("precipice_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(g_work);
  context.applyCommandLine(argc, argv);
  const int rc = context.run();
  std::error_code ec;
  fs::remove_all(g_work, ec);
  return rc;
}
