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

// Linear programs  min c^T x  s.t.  a_i^T x {<=, =, >=} b_i,  x_j >= 0 or free,
// with a dense-tableau simplex for small and medium instances and a
// restarted primal-dual hybrid gradient method for large ones.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pulserec/linear_operator.hpp"

namespace pulserec {

enum class Sense { kLe, kEq, kGe };

struct LinearProgram {
  std::shared_ptr<const LinearOperator> a;
  std::vector<double> c;
  std::vector<double> b;
  std::vector<Sense> sense;
  // Variables are x_j >= 0 unless flagged free.
  std::vector<bool> free;

  std::size_t num_rows() const { return b.size(); }
  std::size_t num_cols() const { return c.size(); }
  // Throws DimensionError / InvalidParameter on malformed input.
  void validate() const;
  double objective(std::span<const double> x) const;
  // max over rows of the constraint violation.
  double primal_violation(std::span<const double> x) const;
};

LinearProgram make_lp(SparseMatrix a, std::vector<double> c, std::vector<double> b,
                      std::vector<Sense> sense);

enum class LPStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view status_name(LPStatus status);

struct IterationRecord {
  int64_t iteration = 0;
  int phase = 0;  // simplex: 1 or 2; splitting: 0
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

struct LPSolution {
  std::vector<double> x;
  // Multipliers with the reduced cost c - A^T y: y_i <= 0 on <= rows, >= 0 on
  // >= rows, free on equality rows.
  std::vector<double> y;
  double objective = 0.0;
  LPStatus status = LPStatus::kIterationLimit;
  double primal_residual = 0.0;  // max constraint violation
  double dual_residual = 0.0;    // max reduced-cost sign violation
  double gap = 0.0;              // |c^T x - b^T y|
  int64_t iterations = 0;
  std::string backend;
  std::vector<IterationRecord> history;

  bool optimal() const { return status == LPStatus::kOptimal; }
};

struct SimplexOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  double pivot_tol = 1e-9;
  int64_t max_iter = 200000;
  // Degenerate pivots in a row before switching to Bland's rule.
  int stall_limit = 50;
  bool record_history = false;
};

struct SplittingOptions {
  double feas_tol = 1e-6;
  double gap_tol = 1e-6;
  int64_t max_iter = 500000;
  int check_every = 64;
  int scaling_passes = 10;
  bool record_history = false;
};

LPSolution solve_simplex(const LinearProgram& lp, const SimplexOptions& options = {});
LPSolution solve_splitting(const LinearProgram& lp, const SplittingOptions& options = {});

// Duality diagnostics in the original scaling; fills residual and gap fields.
void evaluate_solution(const LinearProgram& lp, LPSolution& solution);

// Columns "iteration,phase,objective,primal_residual,dual_residual,gap".
void write_history_csv(std::ostream& os, const LPSolution& solution);
void to_json(nlohmann::json& j, const LPSolution& s);

}  // namespace pulserec
