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

#include "pulserec/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pulserec/error.hpp"

namespace pulserec {

SparseMatrix LinearOperator::to_sparse() const {
  const auto m = rows();
  const auto n = cols();
  std::vector<Eigen::Triplet<double, int64_t>> entries;
  std::vector<double> e(n, 0.0), column(m);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply(e, column);
    e[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (column[i] != 0.0) {
        entries.emplace_back(static_cast<int64_t>(i), static_cast<int64_t>(j), column[i]);
      }
    }
  }
  SparseMatrix out(static_cast<int64_t>(m), static_cast<int64_t>(n));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

namespace {

SparseMatrix abs_power(const SparseMatrix& a, double p) {
  SparseMatrix out = a;
  for (int64_t k = 0; k < out.nonZeros(); ++k) {
    double& v = out.valuePtr()[k];
    v = p == 1.0 ? std::abs(v) : std::pow(std::abs(v), p);
  }
  return out;
}

}  // namespace

void LinearOperator::apply_abs_power(double p, std::span<const double> x,
                                     std::span<double> y) const {
  SparseOperator(abs_power(to_sparse(), p)).apply(x, y);
}

void LinearOperator::apply_abs_power_transpose(double p, std::span<const double> y,
                                               std::span<double> x) const {
  SparseOperator(abs_power(to_sparse(), p)).apply_transpose(y, x);
}

SparseOperator::SparseOperator(SparseMatrix matrix) : matrix_(std::move(matrix)) {
  matrix_.makeCompressed();
  for (int64_t k = 0; k < matrix_.nonZeros(); ++k) {
    if (!std::isfinite(matrix_.valuePtr()[k])) throw InvalidParameter("non-finite matrix entry");
  }
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols() || y.size() != rows()) throw DimensionError("SparseOperator::apply");
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  yv.noalias() = matrix_ * xv;
}

void SparseOperator::apply_transpose(std::span<const double> y, std::span<double> x) const {
  if (x.size() != cols() || y.size() != rows()) {
    throw DimensionError("SparseOperator::apply_transpose");
  }
  Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  Eigen::Map<Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  xv.noalias() = matrix_.transpose() * yv;
}

void SparseOperator::apply_abs_power(double p, std::span<const double> x,
                                     std::span<double> y) const {
  if (x.size() != cols() || y.size() != rows()) throw DimensionError("apply_abs_power");
  for (int64_t i = 0; i < matrix_.outerSize(); ++i) {
    double acc = 0.0;
    for (SparseMatrix::InnerIterator it(matrix_, i); it; ++it) {
      acc += std::pow(std::abs(it.value()), p) * x[static_cast<std::size_t>(it.col())];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
}

void SparseOperator::apply_abs_power_transpose(double p, std::span<const double> y,
                                               std::span<double> x) const {
  if (x.size() != cols() || y.size() != rows()) throw DimensionError("apply_abs_power_transpose");
  std::fill(x.begin(), x.end(), 0.0);
  for (int64_t i = 0; i < matrix_.outerSize(); ++i) {
    const double yi = y[static_cast<std::size_t>(i)];
    for (SparseMatrix::InnerIterator it(matrix_, i); it; ++it) {
      x[static_cast<std::size_t>(it.col())] += std::pow(std::abs(it.value()), p) * yi;
    }
  }
}

}  // namespace pulserec

