// Copyright 2026 The pulserec Authors
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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pulserec/error.hpp"
#include "pulserec/experiments.hpp"

using namespace pulserec;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_1d() {
  auto c = ExperimentConfig::demo_1d();
  c.window = {-30, 30};
  c.spikes = 3;
  c.nu = 1.0;
  c.deltas = {5.0};
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("presets validate") {
  CHECK_NOTHROW(ExperimentConfig::demo_1d().validate());
  CHECK_NOTHROW(ExperimentConfig::demo_2d().validate());
  CHECK_NOTHROW(ExperimentConfig::sweep().validate());
  CHECK_NOTHROW(ExperimentConfig::certify().validate());
  auto c = ExperimentConfig::demo_1d();
  c.sigma = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
}

TEST_CASE("config merge") {
  auto c = ExperimentConfig::sweep();
  merge_config(nlohmann::json::parse(R"({"r": [3], "delta": [1, 2], "seed": 9,
      "kernel": "gaussian", "backend": "splitting", "pattern": "positive"})"),
               c);
  CHECK(c.r_values == std::vector<int>{3});
  CHECK(c.deltas == std::vector<double>{1.0, 2.0});
  CHECK(c.seed == 9);
  CHECK(c.kernel == "gaussian");
  CHECK(c.backend == Backend::kSplitting);
  CHECK(c.pattern == SignPattern::kPositive);
  CHECK(c.trials == 50);
  CHECK_THROWS(merge_config(nlohmann::json::parse(R"({"bogus": 1})"), c));

  const nlohmann::json j = c;
  ExperimentConfig back;
  merge_config(j, back);
  CHECK(nlohmann::json(back) == j);
}

TEST_CASE("general arm selection") {
  auto c = ExperimentConfig::sweep();
  CHECK(c.runs_general(2));
  CHECK_FALSE(c.runs_general(3));
  c.general_r_values.clear();
  CHECK(c.runs_general(3));
}

TEST_CASE("demo is reproducible") {
  auto c = small_1d();
  c.trials = 2;
  const auto dir = std::filesystem::temp_directory_path() / "pulserec_demo_a";
  const auto dir2 = std::filesystem::temp_directory_path() / "pulserec_demo_b";
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
  const auto a = run_demo_1d(c, dir);
  const auto b = run_demo_1d(c, dir2);
  std::ostringstream ja, jb;
  write_result_json(ja, a);
  write_result_json(jb, b);
  CHECK(ja.str() == jb.str());
  for (const char* f : {"trial0_truth.csv", "trial0_measurement.csv", "trial0_estimate.csv",
                        "trial1_report.json"}) {
    CAPTURE(f);
    REQUIRE(std::filesystem::exists(dir / f));
    CHECK(read_file(dir / f) == read_file(dir2 / f));
  }
  CHECK(a.rows[0].seed != a.rows[1].seed);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("noiseless demo recovers exactly") {
  auto c = small_1d();
  c.deltas = {0.0};
  c.trials = 3;
  const auto res = run_demo_1d(c);
  for (const auto& row : res.rows) {
    CHECK(row.ok);
    CHECK(row.h_l1 <= 1e-6 * row.truth_l1);
    CHECK(row.hits == row.true_count);
  }
}

TEST_CASE("aggregate statistics") {
  ExperimentConfig c = small_1d();
  std::vector<TrialRow> rows(4);
  const double loc[] = {0.01, 0.03, 0.02, 9.0};
  for (int i = 0; i < 4; ++i) {
    rows[i].trial = i;
    rows[i].delta = 5.0;
    rows[i].r = 2;
    rows[i].ok = i != 3;
    rows[i].loc_mean = loc[i];
    rows[i].h_l1 = 2.0 * i;
  }
  const auto agg = aggregate(c, rows);
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].trials == 4);
  CHECK(agg[0].failures == 1);
  CHECK(agg[0].flagged);
  CHECK(agg[0].loc_mean == doctest::Approx(0.02));
  CHECK(agg[0].loc_std == doctest::Approx(0.01));
  CHECK(agg[0].h_l1_mean == doctest::Approx(2.0));
  CHECK(agg[0].h_l1_std == doctest::Approx(2.0));
}

TEST_CASE("small sweep layout") {
  auto c = ExperimentConfig::sweep();
  c.window = {-30, 30};
  c.spikes = 3;
  c.nu = 1.0;
  c.trials = 2;
  c.r_values = {1, 2};
  c.deltas = {0.0, 5.0};
  c.threads = 1;
  const auto res = run_sweep(c);
  // r = 1: positive only; r = 2: both arms.
  CHECK(res.rows.size() == 2 * (2 + 2 * 2));
  CHECK(res.aggregates.size() == 2 * 3);
  // Paired instances: same support and truth norm across deltas and arms.
  for (const auto& row : res.rows) {
    for (const auto& other : res.rows) {
      if (row.r == other.r && row.trial == other.trial) {
        CHECK(row.truth_l1 == doctest::Approx(other.truth_l1));
      }
    }
  }
  CHECK(res.cell(5.0, 2, false).trials == 2);
  std::ostringstream os;
  write_trials_csv(os, res.rows);
  const auto text = os.str();
  CHECK(text.rfind("trial,seed,delta,r,positive,status,ok,objective,h_l1,truth_l1,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(res.rows.size()) + 1);
}

TEST_CASE("certificate study writers") {
  auto c = ExperimentConfig::certify();
  c.kernels = {"cauchy"};
  c.max_count = 3;
  const auto study = run_certificate_study(c);
  REQUIRE(study.results.size() == 1);
  CHECK(study.failures.empty());
  std::ostringstream os;
  write_study_csv(os, study);
  CHECK(os.str().rfind("kernel,pattern,nu_star,margin\ncauchy,alternating,", 0) == 0);
  std::ostringstream trace;
  write_study_trace_csv(trace, study);
  CHECK(trace.str().rfind("kernel,count,nu,passed,worst_margin\n", 0) == 0);

  c.nu_hi = 0.2;
  const auto bad = run_certificate_study(c);
  CHECK(bad.results.empty());
  CHECK(bad.failures.size() == 1);
}
