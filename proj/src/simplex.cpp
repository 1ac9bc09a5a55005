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

// Two-phase primal simplex on a condensed (Tucker) tableau. Only nonbasic
// columns are stored: x_B = beta - T x_N, objective z = z0 + d^T x_N. A pivot
// is a Jordan exchange of a basic and a nonbasic variable. Pricing is
// Dantzig's rule, the ratio test is Harris's two-pass test, and Bland's rule
// takes over after a run of degenerate pivots. At the end the basis is
// refactored with LU and KKT conditions re-checked; if they fail, the tableau
// is rebuilt from the basis and the iteration continues.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "pulserec/error.hpp"
#include "pulserec/linprog.hpp"

namespace pulserec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Every row becomes  sum_j a_ij x_j (+- slack) (+ artificial) = b_i  with b_i >= 0.
struct StandardForm {
  std::size_t m = 0;
  std::size_t n_struct = 0;
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  Eigen::SparseMatrix<double> a;  // m x total
  std::vector<double> b;
  std::vector<double> cost;
  std::vector<double> row_sign;
  std::vector<std::size_t> struct_orig;
  std::vector<double> struct_sign;
  std::vector<int64_t> initial_basis;

  std::size_t total() const { return n_struct + n_slack + n_art; }
  bool artificial(int64_t v) const {
    return static_cast<std::size_t>(v) >= n_struct + n_slack;
  }
};

StandardForm standardize(const LinearProgram& lp) {
  StandardForm sf;
  sf.m = lp.num_rows();
  const std::size_t n = lp.num_cols();
  std::vector<int64_t> plus(n), minus(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    plus[j] = static_cast<int64_t>(sf.struct_orig.size());
    sf.struct_orig.push_back(j);
    sf.struct_sign.push_back(1.0);
    if (!lp.free.empty() && lp.free[j]) {
      minus[j] = static_cast<int64_t>(sf.struct_orig.size());
      sf.struct_orig.push_back(j);
      sf.struct_sign.push_back(-1.0);
    }
  }
  sf.n_struct = sf.struct_orig.size();

  std::vector<double> slack_coef(sf.m, 0.0);
  sf.row_sign.resize(sf.m);
  sf.b.resize(sf.m);
  for (std::size_t i = 0; i < sf.m; ++i) {
    const double s1 = lp.sense[i] == Sense::kGe ? -1.0 : 1.0;
    const double s2 = s1 * lp.b[i] < 0.0 ? -1.0 : 1.0;
    sf.row_sign[i] = s1 * s2;
    sf.b[i] = sf.row_sign[i] * lp.b[i];
    if (lp.sense[i] != Sense::kEq) {
      slack_coef[i] = s2;
      ++sf.n_slack;
    }
  }

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> entries;
  const SparseMatrix a = lp.a->to_sparse();
  for (int64_t i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      const double v = sf.row_sign[i] * it.value();
      const auto j = static_cast<std::size_t>(it.col());
      entries.emplace_back(i, plus[j], v);
      if (minus[j] >= 0) entries.emplace_back(i, minus[j], -v);
    }
  }
  sf.initial_basis.resize(sf.m);
  std::size_t slack = sf.n_struct;
  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < sf.m; ++i) {
    if (slack_coef[i] != 0.0) {
      entries.emplace_back(i, slack, slack_coef[i]);
      if (slack_coef[i] > 0.0) sf.initial_basis[i] = static_cast<int64_t>(slack);
      ++slack;
    }
    if (slack_coef[i] <= 0.0) art_rows.push_back(i);
  }
  sf.n_art = art_rows.size();
  for (std::size_t k = 0; k < art_rows.size(); ++k) {
    const auto v = static_cast<int64_t>(sf.n_struct + sf.n_slack + k);
    entries.emplace_back(art_rows[k], v, 1.0);
    sf.initial_basis[art_rows[k]] = v;
  }
  sf.a.resize(static_cast<Eigen::Index>(sf.m), static_cast<Eigen::Index>(sf.total()));
  sf.a.setFromTriplets(entries.begin(), entries.end());
  sf.a.makeCompressed();

  sf.cost.assign(sf.total(), 0.0);
  for (std::size_t k = 0; k < sf.n_struct; ++k) {
    sf.cost[k] = sf.struct_sign[k] * lp.c[sf.struct_orig[k]];
  }
  return sf;
}

class Simplex {
 public:
  Simplex(const StandardForm& sf, const SimplexOptions& options)
      : sf_(sf), opt_(options), m_(sf.m) {
    basis_ = sf.initial_basis;
    std::vector<bool> basic(sf.total(), false);
    for (auto v : basis_) basic[static_cast<std::size_t>(v)] = true;
    for (std::size_t v = 0; v < sf.total(); ++v) {
      if (!basic[v]) nonbasic_.push_back(static_cast<int64_t>(v));
    }
    ncols_ = nonbasic_.size();
    stride_ = std::max<std::size_t>(ncols_, 1);
    t_.assign(m_ * stride_, 0.0);
    for (std::size_t j = 0; j < ncols_; ++j) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(sf.a, nonbasic_[j]); it; ++it) {
        t_[static_cast<std::size_t>(it.row()) * stride_ + j] = it.value();
      }
    }
    beta_ = sf.b;
    d1_.assign(ncols_, 0.0);
    d2_.resize(ncols_);
    for (std::size_t j = 0; j < ncols_; ++j) d2_[j] = sf.cost[nonbasic_[j]];
    for (std::size_t i = 0; i < m_; ++i) {
      if (!sf.artificial(basis_[i])) continue;
      z1_ += beta_[i];
      const double* row = &t_[i * stride_];
      for (std::size_t j = 0; j < ncols_; ++j) d1_[j] -= row[j];
    }
    double bmax = 0.0;
    for (double v : sf.b) bmax = std::max(bmax, v);
    infeasibility_tol_ = std::max(opt_.feas_tol, 1e-12) * (1.0 + bmax) * 10.0;
  }

  LPStatus run(std::vector<IterationRecord>* history) {
    history_ = history;
    if (sf_.n_art > 0) {
      // Tableau drift can leave spurious artificial mass; rebuild from an
      // LU factorization before declaring infeasibility.
      for (int attempt = 0;; ++attempt) {
        const LPStatus s = iterate(1);
        if (s == LPStatus::kIterationLimit) return s;
        if (artificial_residual() <= infeasibility_tol_) break;
        if (attempt >= 3) return LPStatus::kInfeasible;
        if (!rebuild_tableau()) return LPStatus::kIterationLimit;
        if (artificial_residual() <= infeasibility_tol_) break;
      }
      drive_out_artificials();
    }
    for (int attempt = 0;; ++attempt) {
      const LPStatus s = iterate(2);
      if (s == LPStatus::kIterationLimit) return s;
      if (s == LPStatus::kUnbounded) {
        // Confirm on a fresh tableau; drift can hide a blocking row.
        if (attempt >= 3) return s;
        if (!rebuild_tableau()) return LPStatus::kIterationLimit;
        continue;
      }
      if (refactor(attempt < 3)) return LPStatus::kOptimal;
      if (!std::isfinite(z2_)) return LPStatus::kIterationLimit;
      if (attempt >= 3) return LPStatus::kIterationLimit;
    }
  }

  int64_t iterations() const { return iterations_; }

  // Basic values and simplex multipliers from an LU factorization of B.
  void solution(std::vector<double>& xbar, std::vector<double>& pi) {
    if (!lu_) lu_.emplace(basis_matrix());
    const auto& lu = *lu_;
    Eigen::Map<const Eigen::VectorXd> b(sf_.b.data(), static_cast<Eigen::Index>(m_));
    Eigen::VectorXd xb = lu.solve(b);
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    for (std::size_t i = 0; i < m_; ++i) cb[static_cast<Eigen::Index>(i)] = sf_.cost[basis_[i]];
    Eigen::VectorXd p = lu.transpose().solve(cb);
    xbar.assign(sf_.total(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      xbar[basis_[i]] = std::max(xb[static_cast<Eigen::Index>(i)], 0.0);
    }
    pi.assign(p.data(), p.data() + p.size());
  }

 private:
  LPStatus iterate(int phase) {
    std::vector<double>& d = phase == 1 ? d1_ : d2_;
    int stalled = 0;
    while (true) {
      if (phase == 1 && z1_ <= 0.0) return LPStatus::kOptimal;
      if (iterations_ >= opt_.max_iter) return LPStatus::kIterationLimit;
      if (stalled >= opt_.stall_limit && !perturbed_) {
        perturb();
        stalled = 0;
      }
      const bool bland = stalled >= opt_.stall_limit;
      const int64_t c = entering(d, bland);
      if (c < 0) return LPStatus::kOptimal;
      const int64_t r = leaving(static_cast<std::size_t>(c), phase, bland);
      if (r < 0) {
        if (phase == 2) return LPStatus::kUnbounded;
        return LPStatus::kOptimal;
      }
      const double step =
          beta_[static_cast<std::size_t>(r)] / t_[static_cast<std::size_t>(r) * stride_ + c];
      stalled = std::abs(step) <= 1e-12 ? stalled + 1 : 0;
      const int64_t leaving_var = basis_[static_cast<std::size_t>(r)];
      pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      if (sf_.artificial(leaving_var)) remove_column(static_cast<std::size_t>(c));
      ++iterations_;
      if (history_) {
        history_->push_back({iterations_, phase, phase == 1 ? z1_ : z2_, 0.0, 0.0, 0.0});
      }
    }
  }

  int64_t entering(const std::vector<double>& d, bool bland) const {
    const double tol = opt_.feas_tol;
    int64_t best = -1;
    if (bland) {
      int64_t best_var = std::numeric_limits<int64_t>::max();
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (d[j] < -tol && nonbasic_[j] < best_var) {
          best_var = nonbasic_[j];
          best = static_cast<int64_t>(j);
        }
      }
      return best;
    }
    double most = -tol;
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (d[j] < most) {
        most = d[j];
        best = static_cast<int64_t>(j);
      }
    }
    return best;
  }

  int64_t leaving(std::size_t c, int phase, bool bland) const {
    const double ptol = opt_.pivot_tol;
    if (phase == 2) {
      // A basic artificial must stay at zero: it blocks at ratio 0.
      int64_t block = -1;
      double biggest = ptol;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!sf_.artificial(basis_[i])) continue;
        const double a = std::abs(t_[i * stride_ + c]);
        if (a > biggest) {
          biggest = a;
          block = static_cast<int64_t>(i);
        }
      }
      if (block >= 0) return block;
    }
    if (bland) {
      int64_t best = -1;
      double best_ratio = kInf;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_[i * stride_ + c];
        if (a <= ptol) continue;
        const double ratio = std::max(beta_[i], 0.0) / a;
        if (ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[static_cast<std::size_t>(best)])) {
          best_ratio = ratio;
          best = static_cast<int64_t>(i);
        }
      }
      return best;
    }
    if (perturbed_) {
      // Basic values are distinct now, so take the exact minimum ratio and
      // break near ties by pivot size.
      double theta = kInf;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_[i * stride_ + c];
        if (a > ptol) theta = std::min(theta, std::max(beta_[i], 0.0) / a);
      }
      if (theta == kInf) return -1;
      const double cut = theta * (1.0 + 1e-9) + 1e-300;
      int64_t best = -1;
      double best_pivot = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_[i * stride_ + c];
        if (a > ptol && std::max(beta_[i], 0.0) / a <= cut && a > best_pivot) {
          best_pivot = a;
          best = static_cast<int64_t>(i);
        }
      }
      return best;
    }
    double theta = kInf;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = t_[i * stride_ + c];
      if (a > ptol) theta = std::min(theta, (beta_[i] + opt_.feas_tol) / a);
    }
    if (theta == kInf) return -1;
    int64_t best = -1;
    double best_pivot = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = t_[i * stride_ + c];
      if (a > ptol && beta_[i] / a <= theta && a > best_pivot) {
        best_pivot = a;
        best = static_cast<int64_t>(i);
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t c) {
    double* row_r = &t_[r * stride_];
    const double inv = 1.0 / row_r[c];
    nz_.clear();
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (row_r[j] != 0.0) {
        row_r[j] *= inv;
        nz_.push_back(j);
      }
    }
    row_r[c] = inv;
    beta_[r] = std::max(beta_[r] * inv, 0.0);
    const double beta_r = beta_[r];
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * stride_];
      const double f = row[c];
      if (f == 0.0) continue;
      row[c] = 0.0;
      for (auto j : nz_) row[j] -= f * row_r[j];
      beta_[i] = std::max(beta_[i] - f * beta_r, 0.0);
    }
    for (auto* d : {&d1_, &d2_}) {
      const double f = (*d)[c];
      if (f == 0.0) continue;
      (*d)[c] = 0.0;
      for (auto j : nz_) (*d)[j] -= f * row_r[j];
      (d == &d1_ ? z1_ : z2_) += f * beta_r;
    }
    std::swap(basis_[r], nonbasic_[c]);
  }

  void remove_column(std::size_t c) {
    const std::size_t last = ncols_ - 1;
    if (c != last) {
      for (std::size_t i = 0; i < m_; ++i) t_[i * stride_ + c] = t_[i * stride_ + last];
      d1_[c] = d1_[last];
      d2_[c] = d2_[last];
      nonbasic_[c] = nonbasic_[last];
    }
    for (std::size_t i = 0; i < m_; ++i) t_[i * stride_ + last] = 0.0;
    d1_.pop_back();
    d2_.pop_back();
    nonbasic_.pop_back();
    --ncols_;
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (!sf_.artificial(basis_[r])) continue;
      const double* row = &t_[r * stride_];
      int64_t best = -1;
      double biggest = opt_.pivot_tol;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (std::abs(row[j]) > biggest) {
          biggest = std::abs(row[j]);
          best = static_cast<int64_t>(j);
        }
      }
      if (best < 0) continue;  // redundant row
      pivot(r, static_cast<std::size_t>(best));
      remove_column(static_cast<std::size_t>(best));
    }
  }

  Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_),
                                                static_cast<Eigen::Index>(m_));
    for (std::size_t i = 0; i < m_; ++i) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(sf_.a, basis_[i]); it; ++it) {
        bm(it.row(), static_cast<Eigen::Index>(i)) = it.value();
      }
    }
    return bm;
  }

  // Recomputes basic values and reduced costs from an LU factorization. If
  // KKT fails and rebuild is set, replaces the tableau with B^-1 N.
  bool refactor(bool rebuild) {
    lu_.emplace(basis_matrix());
    const auto& lu = *lu_;
    Eigen::Map<const Eigen::VectorXd> b(sf_.b.data(), static_cast<Eigen::Index>(m_));
    const Eigen::VectorXd xb = lu.solve(b);
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    for (std::size_t i = 0; i < m_; ++i) cb[static_cast<Eigen::Index>(i)] = sf_.cost[basis_[i]];
    const Eigen::VectorXd pi = lu.transpose().solve(cb);

    const double scale = 1.0 + xb.cwiseAbs().maxCoeff();
    bool ok = true;
    for (std::size_t i = 0; i < m_; ++i) {
      const double v = xb[static_cast<Eigen::Index>(i)];
      if (v < -opt_.feas_tol * scale) ok = false;
      if (sf_.artificial(basis_[i]) && std::abs(v) > opt_.feas_tol * scale) ok = false;
    }
    std::vector<double> reduced(ncols_);
    for (std::size_t j = 0; j < ncols_; ++j) {
      double dot = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(sf_.a, nonbasic_[j]); it; ++it) {
        dot += it.value() * pi[it.row()];
      }
      reduced[j] = sf_.cost[nonbasic_[j]] - dot;
      if (reduced[j] < -opt_.gap_tol * (1.0 + std::abs(sf_.cost[nonbasic_[j]]))) ok = false;
    }
    if (ok || !rebuild) return ok;
    rebuild_tableau();
    return false;
  }

  // Shifts basic values by tiny distinct amounts so degenerate ratio ties
  // break. The final refactor recomputes the exact values.
  void perturb() {
    perturbed_ = true;
    double bmax = 0.0;
    for (double v : sf_.b) bmax = std::max(bmax, std::abs(v));
    const double base = 1e-11 * (1.0 + bmax);
    for (std::size_t i = 0; i < m_; ++i) {
      if (sf_.artificial(basis_[i])) continue;
      const double shift = base * (1.0 + static_cast<double>((i * 2654435761ULL) % 1024) / 1024.0);
      beta_[i] += shift;
      z2_ += sf_.cost[basis_[i]] * shift;
    }
  }

  double artificial_residual() const {
    double residual = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (sf_.artificial(basis_[i])) residual += std::max(beta_[i], 0.0);
    }
    return residual;
  }

  // Replaces the tableau, basic values and both cost rows with values
  // computed from a fresh factorization of the current basis. False when
  // the basis has gone numerically singular.
  bool rebuild_tableau() {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix());
    Eigen::Map<const Eigen::VectorXd> b(sf_.b.data(), static_cast<Eigen::Index>(m_));
    const Eigen::VectorXd xb = lu.solve(b);
    Eigen::VectorXd c1(static_cast<Eigen::Index>(m_)), c2(static_cast<Eigen::Index>(m_));
    for (std::size_t i = 0; i < m_; ++i) {
      c1[static_cast<Eigen::Index>(i)] = sf_.artificial(basis_[i]) ? 1.0 : 0.0;
      c2[static_cast<Eigen::Index>(i)] = sf_.cost[basis_[i]];
    }
    const Eigen::VectorXd pi1 = lu.transpose().solve(c1);
    const Eigen::VectorXd pi2 = lu.transpose().solve(c2);
    Eigen::MatrixXd nm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_),
                                                static_cast<Eigen::Index>(ncols_));
    for (std::size_t j = 0; j < ncols_; ++j) {
      double dot1 = 0.0, dot2 = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(sf_.a, nonbasic_[j]); it; ++it) {
        nm(it.row(), static_cast<Eigen::Index>(j)) = it.value();
        dot1 += it.value() * pi1[it.row()];
        dot2 += it.value() * pi2[it.row()];
      }
      d1_[j] = (sf_.artificial(nonbasic_[j]) ? 1.0 : 0.0) - dot1;
      d2_[j] = sf_.cost[nonbasic_[j]] - dot2;
    }
    const Eigen::MatrixXd tn = lu.solve(nm);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < ncols_; ++j) {
        t_[i * stride_ + j] = tn(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      beta_[i] = std::max(xb[static_cast<Eigen::Index>(i)], 0.0);
    }
    z1_ = c1.dot(xb);
    z2_ = c2.dot(xb);
    lu_.reset();
    perturbed_ = false;
    return std::isfinite(z1_) && std::isfinite(z2_);
  }

  const StandardForm& sf_;
  const SimplexOptions& opt_;
  std::size_t m_;
  std::size_t ncols_ = 0;
  std::size_t stride_ = 1;
  std::vector<double> t_;
  std::vector<double> beta_;
  std::vector<double> d1_;
  std::vector<double> d2_;
  double z1_ = 0.0;
  double z2_ = 0.0;
  std::vector<int64_t> basis_;
  std::vector<int64_t> nonbasic_;
  std::vector<std::size_t> nz_;
  double infeasibility_tol_ = 0.0;
  bool perturbed_ = false;
  int64_t iterations_ = 0;
  std::vector<IterationRecord>* history_ = nullptr;
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

}  // namespace

LPSolution solve_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  LPSolution out;
  out.backend = "simplex";
  out.x.assign(lp.num_cols(), 0.0);
  out.y.assign(lp.num_rows(), 0.0);
  if (lp.num_rows() == 0) {
    // Only bounds: each variable sits at 0 unless its cost pulls it to -inf.
    out.status = LPStatus::kOptimal;
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
      const bool is_free = !lp.free.empty() && lp.free[j];
      if (lp.c[j] < 0.0 || (is_free && lp.c[j] != 0.0)) out.status = LPStatus::kUnbounded;
    }
    evaluate_solution(lp, out);
    return out;
  }

  const StandardForm sf = standardize(lp);
  Simplex simplex(sf, options);
  out.status = simplex.run(options.record_history ? &out.history : nullptr);
  out.iterations = simplex.iterations();

  std::vector<double> xbar, pi;
  simplex.solution(xbar, pi);
  for (std::size_t k = 0; k < sf.n_struct; ++k) {
    out.x[sf.struct_orig[k]] += sf.struct_sign[k] * xbar[k];
  }
  for (std::size_t i = 0; i < sf.m; ++i) out.y[i] = sf.row_sign[i] * pi[i];
  evaluate_solution(lp, out);
  return out;
}

}  // namespace pulserec
