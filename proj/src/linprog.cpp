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

#include "pulserec/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "pulserec/error.hpp"

namespace pulserec {

void LinearProgram::validate() const {
  if (!a) throw InvalidParameter("linear program has no constraint operator");
  if (a->rows() != b.size() || a->cols() != c.size()) {
    throw DimensionError("constraint operator does not match c and b");
  }
  if (sense.size() != b.size()) throw DimensionError("one sense per constraint row expected");
  if (!free.empty() && free.size() != c.size()) throw DimensionError("free flags size mismatch");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(c.begin(), c.end(), finite) || !std::all_of(b.begin(), b.end(), finite)) {
    throw InvalidParameter("non-finite objective or right-hand side");
  }
}

double LinearProgram::objective(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * x[j];
  return acc;
}

double LinearProgram::primal_violation(std::span<const double> x) const {
  std::vector<double> ax(num_rows());
  a->apply(x, ax);
  double worst = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double r = ax[i] - b[i];
    switch (sense[i]) {
      case Sense::kLe: worst = std::max(worst, r); break;
      case Sense::kGe: worst = std::max(worst, -r); break;
      case Sense::kEq: worst = std::max(worst, std::abs(r)); break;
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (free.empty() || !free[j]) worst = std::max(worst, -x[j]);
  }
  return worst;
}

LinearProgram make_lp(SparseMatrix a, std::vector<double> c, std::vector<double> b,
                      std::vector<Sense> sense) {
  LinearProgram lp;
  lp.a = std::make_shared<SparseOperator>(std::move(a));
  lp.c = std::move(c);
  lp.b = std::move(b);
  lp.sense = std::move(sense);
  lp.validate();
  return lp;
}

std::string_view status_name(LPStatus status) {
  switch (status) {
    case LPStatus::kOptimal: return "optimal";
    case LPStatus::kInfeasible: return "infeasible";
    case LPStatus::kUnbounded: return "unbounded";
    case LPStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

void evaluate_solution(const LinearProgram& lp, LPSolution& s) {
  s.objective = lp.objective(s.x);
  s.primal_residual = lp.primal_violation(s.x);
  if (s.y.size() != lp.num_rows()) {
    s.dual_residual = std::numeric_limits<double>::infinity();
    s.gap = std::numeric_limits<double>::infinity();
    return;
  }
  std::vector<double> aty(lp.num_cols());
  lp.a->apply_transpose(s.y, aty);
  double worst = 0.0;
  for (std::size_t j = 0; j < aty.size(); ++j) {
    const double reduced = lp.c[j] - aty[j];
    const bool is_free = !lp.free.empty() && lp.free[j];
    worst = std::max(worst, is_free ? std::abs(reduced) : -reduced);
  }
  double by = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    if (lp.sense[i] == Sense::kLe) worst = std::max(worst, s.y[i]);
    if (lp.sense[i] == Sense::kGe) worst = std::max(worst, -s.y[i]);
    by += lp.b[i] * s.y[i];
  }
  s.dual_residual = worst;
  s.gap = std::abs(s.objective - by);
}

void write_history_csv(std::ostream& os, const LPSolution& solution) {
  os << std::setprecision(17) << "iteration,phase,objective,primal_residual,dual_residual,gap\n";
  for (const auto& h : solution.history) {
    os << h.iteration << ',' << h.phase << ',' << h.objective << ',' << h.primal_residual << ','
       << h.dual_residual << ',' << h.gap << '\n';
  }
}

void to_json(nlohmann::json& j, const LPSolution& s) {
  j = {{"backend", s.backend},
       {"status", status_name(s.status)},
       {"objective", s.objective},
       {"primal_residual", s.primal_residual},
       {"dual_residual", s.dual_residual},
       {"gap", s.gap},
       {"iterations", s.iterations}};
}

}  // namespace pulserec
