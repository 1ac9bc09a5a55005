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
// Brute-force reference solvers shared by the unit tests and the acceptance
// runner. They share no code with the library solvers.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

enum class Rel { kLe, kEq, kGe };

// min c^T x  s.t.  rows (rel) b, x >= 0, by enumerating every choice of n
// active constraints among the rows and the bounds. Empty when infeasible.
// Assumes the optimum is attained, e.g. c > 0.
inline std::optional<double> vertex_enumeration(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                                const std::vector<Rel>& rel,
                                                const Eigen::VectorXd& c, double tol = 1e-9) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const int total = m + n;
  Eigen::MatrixXd h(total, n);
  Eigen::VectorXd hb(total);
  h.topRows(m) = a;
  hb.head(m) = b;
  h.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  hb.tail(n).setZero();

  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < n; ++j) {
      if (x(j) < -tol) return false;
    }
    const Eigen::VectorXd ax = a * x;
    for (int i = 0; i < m; ++i) {
      const double s = tol * (1.0 + std::abs(b(i)));
      if (rel[i] == Rel::kLe && ax(i) > b(i) + s) return false;
      if (rel[i] == Rel::kGe && ax(i) < b(i) - s) return false;
      if (rel[i] == Rel::kEq && std::abs(ax(i) - b(i)) > s) return false;
    }
    return true;
  };

  std::optional<double> best;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      for (int i = 0; i < m; ++i) {
        if (rel[i] == Rel::kEq && std::find(pick.begin(), pick.end(), i) == pick.end()) return;
      }
      Eigen::MatrixXd s(n, n);
      Eigen::VectorXd r(n);
      for (int k = 0; k < n; ++k) {
        s.row(k) = h.row(pick[k]);
        r(k) = hb(pick[k]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(r);
      if (!feasible(x)) return;
      const double v = c.dot(x);
      if (!best || v < *best) best = v;
      return;
    }
    for (int i = start; i <= total - (n - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

// min sum(x)  s.t.  ||y - G x||_1 <= delta, x >= 0, by enumerating the vertices
// of the feasible set in x-space: points where n of the hyperplanes
// {x_j = 0} and {(G x)_i = y_i} meet inside the budget, and points on lines
// cut out by n-1 of them where the budget is tight.
inline std::optional<double> l1_budget_vertices(const Eigen::MatrixXd& g, const Eigen::VectorXd& y,
                                                double delta, double tol = 1e-9) {
  const int m = static_cast<int>(g.rows());
  const int n = static_cast<int>(g.cols());
  const int total = n + m;
  Eigen::MatrixXd h(total, n);
  Eigen::VectorXd hb(total);
  h.topRows(n) = Eigen::MatrixXd::Identity(n, n);
  hb.head(n).setZero();
  h.bottomRows(m) = g;
  hb.tail(m) = y;
  const double scale = 1.0 + y.lpNorm<1>();

  auto budget = [&](const Eigen::VectorXd& x) { return (y - g * x).lpNorm<1>(); };
  std::optional<double> best;
  auto consider = [&](const Eigen::VectorXd& x) {
    if (x.minCoeff() < -tol * scale) return;
    if (budget(x) > delta + tol * scale) return;
    const double v = x.sum();
    if (!best || v < *best) best = v;
  };

  std::vector<int> pick;
  std::function<void(int, int)> rec = [&](int start, int want) {
    if (static_cast<int>(pick.size()) == want) {
      Eigen::MatrixXd s(want, n);
      Eigen::VectorXd r(want);
      for (int k = 0; k < want; ++k) {
        s.row(k) = h.row(pick[k]);
        r(k) = hb(pick[k]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
      if (lu.rank() < want) return;
      if (want == n) {
        consider(lu.solve(r));
        return;
      }
      // Line x0 + t v with F(t) = sum |a_i + t b_i| convex piecewise linear.
      const Eigen::VectorXd x0 = s.completeOrthogonalDecomposition().solve(r);
      const Eigen::MatrixXd ker = lu.kernel();
      if (ker.cols() != 1) return;
      const Eigen::VectorXd v = ker.col(0);
      const Eigen::VectorXd av = y - g * x0;
      const Eigen::VectorXd bv = -(g * v);
      std::vector<double> knots;
      for (int i = 0; i < m; ++i) {
        if (std::abs(bv(i)) > 1e-14) knots.push_back(-av(i) / bv(i));
      }
      std::sort(knots.begin(), knots.end());
      auto f = [&](double t) { return (av + t * bv).lpNorm<1>(); };
      std::vector<double> edges;
      edges.push_back(-std::numeric_limits<double>::infinity());
      edges.insert(edges.end(), knots.begin(), knots.end());
      edges.push_back(std::numeric_limits<double>::infinity());
      for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double lo = edges[k], hi = edges[k + 1];
        double mid;
        if (std::isinf(lo) && std::isinf(hi)) mid = 0.0;
        else if (std::isinf(lo)) mid = hi - 1.0;
        else if (std::isinf(hi)) mid = lo + 1.0;
        else mid = 0.5 * (lo + hi);
        double slope = 0.0;
        for (int i = 0; i < m; ++i) {
          const double ri = av(i) + mid * bv(i);
          slope += (ri > 0 ? 1.0 : (ri < 0 ? -1.0 : 0.0)) * bv(i);
        }
        if (std::abs(slope) < 1e-14) continue;
        const double t = mid + (delta - f(mid)) / slope;
        if (t < lo - 1e-12 || t > hi + 1e-12) continue;
        consider(x0 + t * v);
      }
      return;
    }
    for (int i = start; i <= total - (want - static_cast<int>(pick.size())); ++i) {
      pick.push_back(i);
      rec(i + 1, want);
      pick.pop_back();
    }
  };
  rec(0, n);
  if (n > 1) rec(0, n - 1);
  else {
    // n == 1: F(t) = ||y - t g||_1 along the whole axis.
    const Eigen::VectorXd gv = g.col(0);
    std::vector<double> edges{0.0};
    for (int i = 0; i < m; ++i) {
      if (std::abs(gv(i)) > 1e-14) edges.push_back(y(i) / gv(i));
    }
    std::sort(edges.begin(), edges.end());
    edges.push_back(std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double lo = edges[k], hi = edges[k + 1];
      const double mid = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
      double slope = 0.0;
      for (int i = 0; i < m; ++i) {
        const double ri = y(i) - mid * gv(i);
        slope -= (ri > 0 ? 1.0 : (ri < 0 ? -1.0 : 0.0)) * gv(i);
      }
      if (std::abs(slope) < 1e-14) continue;
      const double t = mid + (delta - (y - mid * gv).lpNorm<1>()) / slope;
      if (t < lo - 1e-12 || t > hi + 1e-12) continue;
      consider(Eigen::VectorXd::Constant(1, t));
    }
  }
  return best;
}

// Dense convolution matrix of a sampled pulse: row k_out, column k_in holds
// g((k_out - k_in) / (sigma N)), computed straight from the pulse shape.
template <typename Pulse>
Eigen::MatrixXd convolution_matrix(Pulse pulse, double sigma, int grid_n, long in_lo, long in_hi,
                                   long out_lo, long out_hi, long half) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(out_hi - out_lo + 1, in_hi - in_lo + 1);
  for (long ko = out_lo; ko <= out_hi; ++ko) {
    for (long ki = in_lo; ki <= in_hi; ++ki) {
      const long s = ko - ki;
      if (s < -half || s > half) continue;
      m(ko - out_lo, ki - in_lo) = pulse(static_cast<double>(s) / (sigma * grid_n));
    }
  }
  return m;
}

}  // namespace oracle
