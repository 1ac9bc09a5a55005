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

#pragma once

#include <cstddef>
#include <span>

#include <Eigen/SparseCore>

namespace pulserec {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int64_t>;

// Abstract linear map R^cols -> R^rows. Solvers that only need products use
// apply/apply_transpose; the rest ask for an explicit sparse copy.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  // y = A x
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
  // x = A^T y
  virtual void apply_transpose(std::span<const double> y, std::span<double> x) const = 0;
  // Default probes one column at a time.
  virtual SparseMatrix to_sparse() const;
  // y = |A|^p x and x = (|A|^p)^T y with the power taken entrywise. Used for
  // diagonal preconditioning; the defaults go through to_sparse().
  virtual void apply_abs_power(double p, std::span<const double> x, std::span<double> y) const;
  virtual void apply_abs_power_transpose(double p, std::span<const double> y,
                                         std::span<double> x) const;
};

class SparseOperator : public LinearOperator {
 public:
  explicit SparseOperator(SparseMatrix matrix);

  std::size_t rows() const override { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t cols() const override { return static_cast<std::size_t>(matrix_.cols()); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply_transpose(std::span<const double> y, std::span<double> x) const override;
  SparseMatrix to_sparse() const override { return matrix_; }
  void apply_abs_power(double p, std::span<const double> x, std::span<double> y) const override;
  void apply_abs_power_transpose(double p, std::span<const double> y,
                                 std::span<double> x) const override;

  const SparseMatrix& matrix() const { return matrix_; }

 private:
  SparseMatrix matrix_;
};

}  // namespace pulserec
