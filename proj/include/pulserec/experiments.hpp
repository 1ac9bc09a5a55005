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
// Config-driven experiment runners: single-instance demos, noise sweeps
// comparing positive and signed programs across regularity levels, and the
// minimal separation study. Every instance is a pure function of the config
// and the master seed.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pulserec/certificates.hpp"
#include "pulserec/grid.hpp"
#include "pulserec/measurement.hpp"
#include "pulserec/recovery.hpp"

namespace pulserec {

struct ExperimentConfig {
  std::string kernel = "cauchy";
  double sigma = 0.1;
  int dimension = 1;
  int grid_n = 100;
  // Signal grid indices; in 2D the same range is used on both axes.
  IndexRange window{-100, 100};
  std::vector<int> r_values{2};
  double nu = 0.5;
  std::vector<double> deltas{75.0};
  int trials = 1;
  double amplitude_sd = 10.0;
  int spikes = 8;
  uint64_t seed = 0;
  Backend backend = Backend::kSimplex;
  std::vector<bool> positivity{true};
  // r values that also run the signed arm; empty means all of r_values.
  std::vector<int> general_r_values;
  NoiseFamily noise = NoiseFamily::kGaussian;
  double threshold = 0.05;
  // A true spike counts as hit when a recovered point lies within this many
  // grid steps (l-infinity in 2D).
  double hit_radius = 2.0;
  // Solver caps; 0 keeps the library defaults.
  long max_iter = 0;
  double splitting_tol = 0.0;
  int threads = 0;  // 0 uses the hardware concurrency
  // Certificate study.
  std::vector<std::string> kernels{"gaussian", "cauchy"};
  SignPattern pattern = SignPattern::kAlternating;
  double nu_lo = 0.1;
  double nu_hi = 3.0;
  double nu_tolerance = 1e-3;
  int min_count = 2;
  int max_count = 15;

  static ExperimentConfig demo_1d();
  static ExperimentConfig demo_2d();
  static ExperimentConfig sweep();
  static ExperimentConfig certify();

  // Throws InvalidParameter.
  void validate() const;
  bool runs_general(int r) const;
};

// Keys absent from the JSON keep the values already in `config`.
void merge_config(const nlohmann::json& j, ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);
void to_json(nlohmann::json& j, const ExperimentConfig& c);

struct TrialRow {
  int trial = 0;
  uint64_t seed = 0;
  double delta = 0.0;
  int r = 0;
  bool positive = true;
  std::string status;
  bool ok = false;  // solver reached a feasible optimum
  double objective = 0.0;
  double h_l1 = 0.0;
  double truth_l1 = 0.0;
  double loc_mean = 0.0;
  double loc_hausdorff = 0.0;
  std::size_t true_count = 0;
  std::size_t recovered_count = 0;
  std::size_t hits = 0;
  double snr_db = 0.0;
  long iterations = 0;
  double runtime_s = 0.0;
  // Largest nu with the realized support (nu sigma, r)-regular (1D only).
  double nu_effective = 0.0;
};

struct AggregateRow {
  double delta = 0.0;
  int r = 0;
  bool positive = true;
  std::size_t trials = 0;
  std::size_t failures = 0;
  bool flagged = false;  // more than 10% failures
  double loc_mean = 0.0;
  double loc_std = 0.0;
  double h_l1_mean = 0.0;
  double h_l1_std = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRow> rows;
  std::vector<AggregateRow> aggregates;

  const AggregateRow& cell(double delta, int r, bool positive) const;
};

// Mean and sample standard deviation per (delta, r, positivity) cell, in
// config order. Failed trials are counted but excluded from the statistics.
std::vector<AggregateRow> aggregate(const ExperimentConfig& config,
                                    const std::vector<TrialRow>& rows);

// Runs `trials` instances at deltas.front() and r_values.front(). When `out`
// is non-empty each instance writes truth, measurement and estimate CSVs
// there, prefixed by the trial number.
ExperimentResult run_demo_1d(const ExperimentConfig& config,
                             const std::filesystem::path& out = {});
ExperimentResult run_demo_2d(const ExperimentConfig& config,
                             const std::filesystem::path& out = {});
// All (delta, r, positivity, trial) cells; trials share instances across
// deltas and arms so comparisons are paired.
ExperimentResult run_sweep(const ExperimentConfig& config);

struct CertificateStudy {
  std::vector<SeparationResult> results;
  // Worst verification margin of the nu_star probe, per result.
  std::vector<double> margins;
  // Kernel names whose search range was exhausted, with the message.
  std::vector<std::pair<std::string, std::string>> failures;
};

CertificateStudy run_certificate_study(const ExperimentConfig& config);

// "trial,seed,delta,r,positive,status,ok,objective,h_l1,truth_l1,loc_mean,
// loc_hausdorff,true_count,recovered_count,hits,snr_db,iterations,nu_effective,
// runtime_s"
void write_trials_csv(std::ostream& os, const std::vector<TrialRow>& rows);
// "delta,r,positive,trials,failures,flagged,loc_mean,loc_std,h_l1_mean,h_l1_std"
void write_aggregates_csv(std::ostream& os, const std::vector<AggregateRow>& rows);
// "kernel,pattern,nu_star,margin" then the per-kernel traces in a second file.
void write_study_csv(std::ostream& os, const CertificateStudy& study);
void write_study_trace_csv(std::ostream& os, const CertificateStudy& study);
// Config, trial rows and aggregates, runtime excluded.
void write_result_json(std::ostream& os, const ExperimentResult& result);

}  // namespace pulserec
