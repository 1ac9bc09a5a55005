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

#include "pulserec/recovery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "pulserec/error.hpp"

namespace pulserec {
namespace {

using Triplet = Eigen::Triplet<double, int64_t>;

LinearProgram recovery_lp(std::shared_ptr<const LinearOperator> conv,
                          const std::vector<double>& y, double delta, bool positive) {
  if (!(delta >= 0.0)) throw InvalidParameter("delta must be >= 0");
  if (y.size() != conv->rows()) throw DimensionError("measurement does not match the operator");
  auto op = std::make_shared<RecoveryOperator>(std::move(conv), positive);
  const std::size_t m = op->measurement_size();
  const std::size_t nx = op->cols() - m;
  LinearProgram lp;
  lp.c.assign(nx + m, 0.0);
  std::fill(lp.c.begin(), lp.c.begin() + static_cast<std::ptrdiff_t>(nx), 1.0);
  lp.b.resize(2 * m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    lp.b[i] = y[i];
    lp.b[m + i] = -y[i];
  }
  lp.b[2 * m] = delta;
  lp.sense.assign(2 * m + 1, Sense::kLe);
  lp.a = std::move(op);
  lp.validate();
  return lp;
}

std::vector<std::size_t> thresholded(const std::vector<double>& v, double tau) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  std::vector<std::size_t> out;
  if (peak == 0.0) return out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) >= tau * peak) out.push_back(k);
  }
  return out;
}

template <typename Distance>
Localization localize(const std::vector<double>& estimate, const std::vector<double>& truth,
                      double tau, double diameter, Distance distance) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidParameter("threshold tau must lie in (0, 1)");
  if (estimate.size() != truth.size()) throw DimensionError("estimate and truth differ in size");
  const auto rec = thresholded(estimate, tau);
  const auto tru = thresholded(truth, tau);
  Localization out;
  out.true_count = tru.size();
  out.recovered_count = rec.size();
  if (tru.empty()) {
    out.hausdorff = rec.empty() ? 0.0 : diameter;
    return out;
  }
  if (rec.empty()) {
    out.empty = true;
    out.nearest.assign(tru.size(), diameter);
    out.mean = diameter;
    out.hausdorff = diameter;
    return out;
  }
  auto nearest = [&](std::size_t k, const std::vector<std::size_t>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (auto j : set) best = std::min(best, distance(k, j));
    return best;
  };
  double sum = 0.0;
  double worst = 0.0;
  for (auto k : tru) {
    const double d = nearest(k, rec);
    out.nearest.push_back(d);
    sum += d;
    worst = std::max(worst, d);
  }
  for (auto j : rec) worst = std::max(worst, nearest(j, tru));
  out.mean = sum / static_cast<double>(tru.size());
  out.hausdorff = worst;
  return out;
}

std::vector<double> signal_part(const std::vector<double>& x, std::size_t n, bool positive) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = positive ? std::max(x[k], 0.0) : x[k] - x[n + k];
  }
  return out;
}

RecoveryReport finish(const LinearProgram& lp, const LinearOperator& conv,
                      const std::vector<double>& y, double delta, bool positive, Backend backend,
                      const RecoveryOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  LPSolution sol = backend == Backend::kSimplex ? solve_simplex(lp, options.simplex)
                                                : solve_splitting(lp, options.splitting);
  RecoveryReport r;
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.estimate = signal_part(sol.x, conv.cols(), positive);
  std::vector<double> gx(conv.rows());
  conv.apply(r.estimate, gx);
  for (std::size_t i = 0; i < gx.size(); ++i) r.residual_l1 += std::abs(y[i] - gx[i]);
  for (double v : r.estimate) r.objective += std::abs(v);
  r.delta = delta;
  const double slack =
      backend == Backend::kSimplex ? 1e-6 : options.splitting.feas_tol * (1.0 + delta);
  r.feasible = sol.optimal() && r.residual_l1 <= delta + slack;
  sol.x.clear();
  sol.y.clear();
  r.solver = std::move(sol);
  return r;
}

void attach_truth(RecoveryReport& r, const std::vector<double>& truth) {
  r.has_truth = true;
  r.h.resize(truth.size());
  r.h_l1 = 0.0;
  r.truth_l1 = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    r.h[k] = r.estimate[k] - truth[k];
    r.h_l1 += std::abs(r.h[k]);
    r.truth_l1 += std::abs(truth[k]);
  }
}

}  // namespace

std::string_view backend_name(Backend backend) {
  return backend == Backend::kSimplex ? "simplex" : "splitting";
}

Backend parse_backend(std::string_view name) {
  if (name == "simplex") return Backend::kSimplex;
  if (name == "splitting") return Backend::kSplitting;
  throw InvalidParameter("unknown backend '" + std::string(name) + "'");
}

RecoveryOperator::RecoveryOperator(std::shared_ptr<const LinearOperator> conv, bool positive)
    : conv_(std::move(conv)), positive_(positive) {
  if (!conv_) throw InvalidParameter("recovery operator needs a convolution operator");
  n_ = conv_->cols();
  m_ = conv_->rows();
  nx_ = positive_ ? n_ : 2 * n_;
}

void RecoveryOperator::forward(bool abs_power, double p, std::span<const double> x,
                               std::span<double> y) const {
  if (x.size() != cols() || y.size() != rows()) throw DimensionError("RecoveryOperator");
  std::vector<double> xs(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_));
  if (!positive_) {
    for (std::size_t k = 0; k < n_; ++k) xs[k] += abs_power ? x[n_ + k] : -x[n_ + k];
  }
  std::span<double> u = y.first(m_);
  if (abs_power) {
    conv_->apply_abs_power(p, xs, u);
  } else {
    conv_->apply(xs, u);
  }
  const double* s = x.data() + nx_;
  double total = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    const double gi = u[i];
    y[i] = abs_power ? gi + s[i] : gi - s[i];
    y[m_ + i] = abs_power ? gi + s[i] : -gi - s[i];
    total += s[i];
  }
  y[2 * m_] = total;
}

void RecoveryOperator::backward(bool abs_power, double p, std::span<const double> y,
                                std::span<double> x) const {
  if (x.size() != cols() || y.size() != rows()) throw DimensionError("RecoveryOperator");
  std::vector<double> v(m_);
  for (std::size_t i = 0; i < m_; ++i) v[i] = abs_power ? y[i] + y[m_ + i] : y[i] - y[m_ + i];
  std::span<double> w = x.first(n_);
  if (abs_power) {
    conv_->apply_abs_power_transpose(p, v, w);
  } else {
    conv_->apply_transpose(v, w);
  }
  if (!positive_) {
    for (std::size_t k = 0; k < n_; ++k) x[n_ + k] = abs_power ? w[k] : -w[k];
  }
  const double budget = y[2 * m_];
  for (std::size_t i = 0; i < m_; ++i) {
    x[nx_ + i] = abs_power ? y[i] + y[m_ + i] + budget : -y[i] - y[m_ + i] + budget;
  }
}

void RecoveryOperator::apply(std::span<const double> x, std::span<double> y) const {
  forward(false, 1.0, x, y);
}

void RecoveryOperator::apply_transpose(std::span<const double> y, std::span<double> x) const {
  backward(false, 1.0, y, x);
}

void RecoveryOperator::apply_abs_power(double p, std::span<const double> x,
                                       std::span<double> y) const {
  forward(true, p, x, y);
}

void RecoveryOperator::apply_abs_power_transpose(double p, std::span<const double> y,
                                                 std::span<double> x) const {
  backward(true, p, y, x);
}

SparseMatrix RecoveryOperator::to_sparse() const {
  const SparseMatrix g = conv_->to_sparse();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(g.nonZeros()) * (positive_ ? 2 : 4) + 3 * m_);
  const auto m = static_cast<int64_t>(m_);
  const auto n = static_cast<int64_t>(n_);
  for (int64_t i = 0; i < g.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(g, i); it; ++it) {
      entries.emplace_back(i, it.col(), it.value());
      entries.emplace_back(m + i, it.col(), -it.value());
      if (!positive_) {
        entries.emplace_back(i, n + it.col(), -it.value());
        entries.emplace_back(m + i, n + it.col(), it.value());
      }
    }
  }
  const auto s0 = static_cast<int64_t>(nx_);
  for (int64_t i = 0; i < m; ++i) {
    entries.emplace_back(i, s0 + i, -1.0);
    entries.emplace_back(m + i, s0 + i, -1.0);
    entries.emplace_back(2 * m, s0 + i, 1.0);
  }
  SparseMatrix out(static_cast<int64_t>(rows()), static_cast<int64_t>(cols()));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

LinearProgram assemble_lp(const RecoveryProblem& problem, double delta_multiplier) {
  const auto& meas = problem.measurement;
  if (meas.grid_n < 1) throw InvalidParameter("measurement N must be >= 1");
  auto conv = std::make_shared<ConvolutionOperator>(problem.kernel, meas.grid_n, problem.grid);
  if (!(conv->output_window() == meas.window)) {
    throw DimensionError("measurement window does not cover the dilated grid");
  }
  return recovery_lp(std::move(conv), meas.y, meas.delta * delta_multiplier, problem.positive);
}

LinearProgram assemble_lp(const RecoveryProblem2D& problem, double delta_multiplier) {
  const auto& meas = problem.measurement;
  if (meas.grid_n < 1) throw InvalidParameter("measurement N must be >= 1");
  auto conv = std::make_shared<ConvolutionOperator2D>(problem.kernel, meas.grid_n, problem.grid);
  if (!(conv->output_window() == meas.window)) {
    throw DimensionError("measurement window does not cover the dilated grid");
  }
  return recovery_lp(std::move(conv), meas.y, meas.delta * delta_multiplier, problem.positive);
}

Localization localization_error(const std::vector<double>& estimate,
                                const std::vector<double>& truth, IndexRange grid, int grid_n,
                                double tau) {
  if (estimate.size() != grid.size()) throw DimensionError("estimate does not match the grid");
  const double n = grid_n;
  return localize(estimate, truth, tau, static_cast<double>(grid.hi - grid.lo) / n,
                  [n](std::size_t a, std::size_t b) {
                    return std::abs(static_cast<double>(a) - static_cast<double>(b)) / n;
                  });
}

Localization localization_error_2d(const std::vector<double>& estimate,
                                   const std::vector<double>& truth, Rect grid, int grid_n,
                                   double tau) {
  if (estimate.size() != grid.size()) throw DimensionError("estimate does not match the grid");
  const double n = grid_n;
  const auto cols = static_cast<int64_t>(grid.cols.size());
  const double diameter =
      static_cast<double>(std::max(grid.rows.hi - grid.rows.lo, grid.cols.hi - grid.cols.lo)) / n;
  return localize(estimate, truth, tau, diameter, [n, cols](std::size_t a, std::size_t b) {
    const auto ia = static_cast<int64_t>(a);
    const auto ib = static_cast<int64_t>(b);
    const auto d = std::max(std::abs(ia / cols - ib / cols), std::abs(ia % cols - ib % cols));
    return static_cast<double>(d) / n;
  });
}

RecoveryReport recover(const RecoveryProblem& problem, const SpikeTrain* truth,
                       const RecoveryOptions& options) {
  const LinearProgram lp = assemble_lp(problem, options.delta_multiplier);
  ConvolutionOperator g(problem.kernel, problem.measurement.grid_n, problem.grid);
  RecoveryReport r = finish(lp, g, problem.measurement.y, lp.b.back(), problem.positive,
                            problem.backend, options);
  if (truth) {
    if (!(truth->window() == problem.grid) || truth->grid_n() != problem.measurement.grid_n) {
      throw DimensionError("ground truth lives on a different grid");
    }
    const auto dense = truth->dense();
    attach_truth(r, dense);
    r.localization =
        localization_error(r.estimate, dense, problem.grid, truth->grid_n(), options.threshold);
  }
  return r;
}

RecoveryReport recover_2d(const RecoveryProblem2D& problem, const SpikeTrain2D* truth,
                          const RecoveryOptions& options) {
  const LinearProgram lp = assemble_lp(problem, options.delta_multiplier);
  ConvolutionOperator2D g(problem.kernel, problem.measurement.grid_n, problem.grid);
  RecoveryReport r = finish(lp, g, problem.measurement.y, lp.b.back(), problem.positive,
                            problem.backend, options);
  if (truth) {
    if (!(truth->window() == problem.grid) || truth->grid_n() != problem.measurement.grid_n) {
      throw DimensionError("ground truth lives on a different grid");
    }
    const auto dense = truth->dense();
    attach_truth(r, dense);
    r.localization =
        localization_error_2d(r.estimate, dense, problem.grid, truth->grid_n(), options.threshold);
  }
  return r;
}

void to_json(nlohmann::json& j, const Localization& l) {
  j = {{"mean", l.mean},
       {"hausdorff", l.hausdorff},
       {"nearest", l.nearest},
       {"true_count", l.true_count},
       {"recovered_count", l.recovered_count},
       {"empty", l.empty}};
}

void to_json(nlohmann::json& j, const RecoveryReport& r) {
  j = {{"estimate", r.estimate},
       {"residual_l1", r.residual_l1},
       {"delta", r.delta},
       {"objective", r.objective},
       {"feasible", r.feasible},
       {"solver", r.solver}};
  if (r.has_truth) {
    j["h"] = r.h;
    j["h_l1"] = r.h_l1;
    j["truth_l1"] = r.truth_l1;
    j["localization"] = r.localization;
  }
}

void write_summary_header(std::ostream& os) {
  os << "status,objective,residual_l1,delta,h_l1,truth_l1,loc_mean,loc_hausdorff,"
        "recovered_count,iterations\n";
}

void write_summary_row(std::ostream& os, const RecoveryReport& r) {
  os << std::setprecision(17) << status_name(r.solver.status) << ',' << r.objective << ','
     << r.residual_l1 << ',' << r.delta << ',' << r.h_l1 << ',' << r.truth_l1 << ','
     << r.localization.mean << ',' << r.localization.hausdorff << ','
     << r.localization.recovered_count << ',' << r.solver.iterations << '\n';
}

void write_estimate_csv(std::ostream& os, const std::vector<double>& estimate, IndexRange grid,
                        int grid_n) {
  os << std::setprecision(17) << "k,t,x\n";
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const int64_t k = grid.lo + static_cast<int64_t>(i);
    os << k << ',' << static_cast<double>(k) / grid_n << ',' << estimate[i] << '\n';
  }
}

}  // namespace pulserec
