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

// Restarted primal-dual hybrid gradient for
//   min c^T x  s.t.  K x >= q (inequality rows),  K x = q (equality rows),
// with x_j >= 0 or free. <= rows are negated into >= form. The matrix is
// equilibrated with a few Ruiz passes (2-norm) and steps follow Pock and
// Chambolle's diagonal rule. Every check_every iterations the average and
// the current iterate are compared by relative KKT error; the better one is
// the restart candidate, accepted on sufficient (0.2) or necessary (0.8)
// decay. The primal weight is rebalanced at each restart.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pulserec/error.hpp"
#include "pulserec/linprog.hpp"

namespace pulserec {
namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// K_s = diag(dr) S A diag(dc), S the row sign flips.
class ScaledProblem {
 public:
  ScaledProblem(const LinearProgram& lp, int passes)
      : lp_(lp), m_(lp.num_rows()), n_(lp.num_cols()) {
    sign_.resize(m_);
    eq_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      sign_[i] = lp.sense[i] == Sense::kLe ? -1.0 : 1.0;
      eq_[i] = lp.sense[i] == Sense::kEq;
    }
    free_.assign(n_, false);
    for (std::size_t j = 0; j < lp.free.size(); ++j) free_[j] = lp.free[j];

    dr_.assign(m_, 1.0);
    dc_.assign(n_, 1.0);
    std::vector<double> sq_r(m_), sq_c(n_), rn(m_), cn(n_);
    for (int pass = 0; pass < passes; ++pass) {
      for (std::size_t j = 0; j < n_; ++j) sq_c[j] = dc_[j] * dc_[j];
      for (std::size_t i = 0; i < m_; ++i) sq_r[i] = dr_[i] * dr_[i];
      lp.a->apply_abs_power(2.0, sq_c, rn);
      lp.a->apply_abs_power_transpose(2.0, sq_r, cn);
      for (std::size_t i = 0; i < m_; ++i) {
        const double norm = std::sqrt(sq_r[i] * rn[i]);
        if (norm > 0.0) dr_[i] /= std::sqrt(norm);
      }
      for (std::size_t j = 0; j < n_; ++j) {
        const double norm = std::sqrt(sq_c[j] * cn[j]);
        if (norm > 0.0) dc_[j] /= std::sqrt(norm);
      }
    }

    lp.a->apply_abs_power(1.0, dc_, rn);
    lp.a->apply_abs_power_transpose(1.0, dr_, cn);
    sigma_.resize(m_);
    tau_.resize(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      const double sum = dr_[i] * rn[i];
      sigma_[i] = sum > 0.0 ? 1.0 / sum : 1.0;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const double sum = dc_[j] * cn[j];
      tau_[j] = sum > 0.0 ? 1.0 / sum : 1.0;
    }

    c_.resize(n_);
    q_.resize(m_);
    for (std::size_t j = 0; j < n_; ++j) c_[j] = dc_[j] * lp.c[j];
    for (std::size_t i = 0; i < m_; ++i) q_[i] = dr_[i] * sign_[i] * lp.b[i];
    q_norm_ = norm2(q_);
    c_norm_ = norm2(c_);
    xbuf_.resize(n_);
    ybuf_.resize(m_);
  }

  void apply(std::span<const double> x, std::span<double> kx) {
    for (std::size_t j = 0; j < n_; ++j) xbuf_[j] = dc_[j] * x[j];
    lp_.a->apply(xbuf_, kx);
    for (std::size_t i = 0; i < m_; ++i) kx[i] *= dr_[i] * sign_[i];
  }

  void apply_transpose(std::span<const double> y, std::span<double> kty) {
    for (std::size_t i = 0; i < m_; ++i) ybuf_[i] = dr_[i] * sign_[i] * y[i];
    lp_.a->apply_transpose(ybuf_, kty);
    for (std::size_t j = 0; j < n_; ++j) kty[j] *= dc_[j];
  }

  struct Kkt {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    double worst() const { return std::max({primal, dual, gap}); }
  };

  Kkt kkt(std::span<const double> x, std::span<const double> y, std::span<const double> kx,
          std::span<const double> kty) const {
    Kkt out;
    double acc = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double r = q_[i] - kx[i];
      const double v = eq_[i] ? r : std::max(r, 0.0);
      acc += v * v;
    }
    out.primal = std::sqrt(acc) / (1.0 + q_norm_);
    acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double r = c_[j] - kty[j];
      const double v = free_[j] ? r : std::min(r, 0.0);
      acc += v * v;
    }
    out.dual = std::sqrt(acc) / (1.0 + c_norm_);
    const double pobj = dot(c_, x);
    const double dobj = dot(q_, y);
    out.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    return out;
  }

  const LinearProgram& lp_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> sign_;
  std::vector<bool> eq_;
  std::vector<bool> free_;
  std::vector<double> dr_, dc_, sigma_, tau_, c_, q_;
  double q_norm_ = 0.0;
  double c_norm_ = 0.0;
  std::vector<double> xbuf_, ybuf_;
};

}  // namespace

LPSolution solve_splitting(const LinearProgram& lp, const SplittingOptions& options) {
  lp.validate();
  if (options.check_every < 1) throw InvalidParameter("check_every must be >= 1");
  ScaledProblem sp(lp, options.scaling_passes);
  const std::size_t m = sp.m_;
  const std::size_t n = sp.n_;

  std::vector<double> x(n, 0.0), y(m, 0.0), x_new(n), y_new(m), xbar(n);
  std::vector<double> kx(m), kty(n, 0.0), kbar(m);
  std::vector<double> x_sum(n, 0.0), y_sum(m, 0.0), x_avg(n), y_avg(m);
  std::vector<double> kx_avg(m), kty_avg(n);
  std::vector<double> x0 = x, y0 = y;
  double weight = 1.0;
  if (sp.c_norm_ > 0.0 && sp.q_norm_ > 0.0) weight = sp.c_norm_ / sp.q_norm_;
  int64_t since_restart = 0;

  LPSolution out;
  out.backend = "splitting";
  out.status = LPStatus::kIterationLimit;

  sp.apply(x, kx);
  double last_kkt = sp.kkt(x, y, kx, kty).worst();

  int64_t it = 0;
  bool converged = false;
  while (it < options.max_iter) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = x[j] - (sp.tau_[j] / weight) * (sp.c_[j] - kty[j]);
      x_new[j] = sp.free_[j] ? v : std::max(v, 0.0);
      xbar[j] = 2.0 * x_new[j] - x[j];
    }
    sp.apply(xbar, kbar);
    for (std::size_t i = 0; i < m; ++i) {
      const double v = y[i] + (sp.sigma_[i] * weight) * (sp.q_[i] - kbar[i]);
      y_new[i] = sp.eq_[i] ? v : std::max(v, 0.0);
    }
    x.swap(x_new);
    y.swap(y_new);
    sp.apply_transpose(y, kty);
    for (std::size_t j = 0; j < n; ++j) x_sum[j] += x[j];
    for (std::size_t i = 0; i < m; ++i) y_sum[i] += y[i];
    ++since_restart;
    ++it;

    if (it % options.check_every != 0) continue;
    const double inv = 1.0 / static_cast<double>(since_restart);
    for (std::size_t j = 0; j < n; ++j) x_avg[j] = x_sum[j] * inv;
    for (std::size_t i = 0; i < m; ++i) y_avg[i] = y_sum[i] * inv;
    sp.apply(x, kx);
    sp.apply(x_avg, kx_avg);
    sp.apply_transpose(y_avg, kty_avg);
    const auto k_cur = sp.kkt(x, y, kx, kty);
    const auto k_avg = sp.kkt(x_avg, y_avg, kx_avg, kty_avg);
    const bool use_avg = k_avg.worst() < k_cur.worst();
    const auto& k_cand = use_avg ? k_avg : k_cur;
    if (options.record_history) {
      const auto& xc = use_avg ? x_avg : x;
      double obj = 0.0;
      for (std::size_t j = 0; j < n; ++j) obj += lp.c[j] * sp.dc_[j] * xc[j];
      out.history.push_back({it, 0, obj, k_cand.primal, k_cand.dual, k_cand.gap});
    }
    if (k_cand.primal <= options.feas_tol && k_cand.dual <= options.feas_tol &&
        k_cand.gap <= options.gap_tol) {
      if (use_avg) {
        x = x_avg;
        y = y_avg;
      }
      converged = true;
      break;
    }
    const double cand = k_cand.worst();
    const bool restart = cand <= 0.2 * last_kkt ||
                         (cand <= 0.8 * last_kkt && since_restart > 3 * options.check_every);
    if (!restart) continue;
    if (use_avg) {
      x = x_avg;
      y = y_avg;
      kty = kty_avg;
    }
    double dx = 0.0, dy = 0.0;
    for (std::size_t j = 0; j < n; ++j) dx += (x[j] - x0[j]) * (x[j] - x0[j]) / sp.tau_[j];
    for (std::size_t i = 0; i < m; ++i) dy += (y[i] - y0[i]) * (y[i] - y0[i]) / sp.sigma_[i];
    dx = std::sqrt(dx);
    dy = std::sqrt(dy);
    if (dx > 1e-10 && dy > 1e-10) {
      weight = std::exp(0.5 * std::log(dy / dx) + 0.5 * std::log(weight));
    }
    x0 = x;
    y0 = y;
    std::fill(x_sum.begin(), x_sum.end(), 0.0);
    std::fill(y_sum.begin(), y_sum.end(), 0.0);
    since_restart = 0;
    last_kkt = cand;
  }

  out.iterations = it;
  out.status = converged ? LPStatus::kOptimal : LPStatus::kIterationLimit;
  out.x.resize(n);
  out.y.resize(m);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = sp.dc_[j] * x[j];
    out.x[j] = sp.free_[j] ? v : std::max(v, 0.0);
  }
  for (std::size_t i = 0; i < m; ++i) out.y[i] = sp.sign_[i] * sp.dr_[i] * y[i];
  evaluate_solution(lp, out);
  return out;
}

}  // namespace pulserec
