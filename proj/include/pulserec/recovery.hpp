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

// The recovery programs
//   min ||x||_1  s.t.  ||y - g * x||_1 <= delta   (x >= 0 for positive signals)
// as linear programs over (x, s) with s >= |y - g * x| elementwise, plus the
// support-distance metrics used to score an estimate.

#pragma once

#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pulserec/kernel.hpp"
#include "pulserec/linprog.hpp"
#include "pulserec/measurement.hpp"
#include "pulserec/spike_train.hpp"

namespace pulserec {

enum class Backend { kSimplex, kSplitting };

std::string_view backend_name(Backend backend);
Backend parse_backend(std::string_view name);

// Rows [G -I; -G -I; 0 1^T] over variables (x, s), or (x+, x-, s) with
// G replaced by [G -G] in the signed case. Matrix-free on top of G.
class RecoveryOperator : public LinearOperator {
 public:
  RecoveryOperator(std::shared_ptr<const LinearOperator> conv, bool positive);

  std::size_t rows() const override { return 2 * m_ + 1; }
  std::size_t cols() const override { return nx_ + m_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply_transpose(std::span<const double> y, std::span<double> x) const override;
  void apply_abs_power(double p, std::span<const double> x, std::span<double> y) const override;
  void apply_abs_power_transpose(double p, std::span<const double> y,
                                 std::span<double> x) const override;
  SparseMatrix to_sparse() const override;

  std::size_t signal_size() const { return n_; }
  std::size_t measurement_size() const { return m_; }
  bool positive() const { return positive_; }

 private:
  void forward(bool abs_power, double p, std::span<const double> x, std::span<double> y) const;
  void backward(bool abs_power, double p, std::span<const double> y, std::span<double> x) const;

  std::shared_ptr<const LinearOperator> conv_;
  bool positive_;
  std::size_t n_;
  std::size_t m_;
  std::size_t nx_;
};

struct RecoveryOptions {
  SimplexOptions simplex;
  SplittingOptions splitting;
  double threshold = 0.05;  // support extraction, fraction of max |x|
  // Solver budget is delta * delta_multiplier.
  double delta_multiplier = 1.0;
};

struct RecoveryProblem {
  Measurement measurement;
  Kernel kernel;
  IndexRange grid;
  bool positive = true;
  Backend backend = Backend::kSimplex;
};

struct RecoveryProblem2D {
  Measurement2D measurement;
  Kernel2D kernel;
  Rect grid;
  bool positive = true;
  Backend backend = Backend::kSplitting;
};

LinearProgram assemble_lp(const RecoveryProblem& problem, double delta_multiplier = 1.0);
LinearProgram assemble_lp(const RecoveryProblem2D& problem, double delta_multiplier = 1.0);

struct Localization {
  double mean = 0.0;       // mean over true spikes of the nearest recovered distance
  double hausdorff = 0.0;  // symmetric worst case
  std::vector<double> nearest;  // per thresholded true spike
  std::size_t true_count = 0;
  std::size_t recovered_count = 0;
  bool empty = false;  // no recovered support; distances are the window diameter
};

// Both supports are thresholded at tau times their own max |x|. Distances are
// in t = k / N units; ties go to the smaller index.
Localization localization_error(const std::vector<double>& estimate,
                                const std::vector<double>& truth, IndexRange grid, int grid_n,
                                double tau = 0.05);
// Chebyshev distance between grid points.
Localization localization_error_2d(const std::vector<double>& estimate,
                                   const std::vector<double>& truth, Rect grid, int grid_n,
                                   double tau = 0.05);

struct RecoveryReport {
  std::vector<double> estimate;  // dense over the grid
  double residual_l1 = 0.0;      // ||y - g * estimate||_1
  double delta = 0.0;            // budget handed to the solver
  double objective = 0.0;        // ||estimate||_1
  bool feasible = false;
  bool has_truth = false;
  std::vector<double> h;  // estimate - truth
  double h_l1 = 0.0;
  double truth_l1 = 0.0;
  Localization localization;
  LPSolution solver;  // diagnostics only; x and y are dropped
  double runtime_s = 0.0;
};

RecoveryReport recover(const RecoveryProblem& problem, const SpikeTrain* truth = nullptr,
                       const RecoveryOptions& options = {});
RecoveryReport recover_2d(const RecoveryProblem2D& problem, const SpikeTrain2D* truth = nullptr,
                          const RecoveryOptions& options = {});

void to_json(nlohmann::json& j, const Localization& l);
// runtime_s is left out so reports are reproducible byte for byte.
void to_json(nlohmann::json& j, const RecoveryReport& r);
// Summary columns "status,objective,residual_l1,delta,h_l1,truth_l1,loc_mean,
// loc_hausdorff,recovered_count,iterations".
void write_summary_header(std::ostream& os);
void write_summary_row(std::ostream& os, const RecoveryReport& r);
// Rows "k,t,x" over the grid.
void write_estimate_csv(std::ostream& os, const std::vector<double>& estimate, IndexRange grid,
                        int grid_n);

}  // namespace pulserec
