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

// Sampled convolution y = g * x + n on a finite window, and the bounded
// l1 noise model. The output window is the input window dilated by the
// kernel stencil, so nothing above the truncation tolerance is clipped.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pulserec/grid.hpp"
#include "pulserec/kernel.hpp"
#include "pulserec/linear_operator.hpp"
#include "pulserec/spike_train.hpp"

namespace pulserec {

enum class ConvolutionMode {
  kDirect,     // stencil loops
  kMatrix,     // explicit sparse matrix
  kSeparable,  // 2D only: one 1D pass per axis
};

class ConvolutionOperator : public LinearOperator {
 public:
  ConvolutionOperator(const Kernel& kernel, int grid_n, IndexRange input,
                      ConvolutionMode mode = ConvolutionMode::kDirect);

  std::size_t rows() const override { return output_.size(); }
  std::size_t cols() const override { return input_.size(); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply_transpose(std::span<const double> y, std::span<double> x) const override;
  SparseMatrix to_sparse() const override;
  void apply_abs_power(double p, std::span<const double> x, std::span<double> y) const override;
  void apply_abs_power_transpose(double p, std::span<const double> y,
                                 std::span<double> x) const override;

  int grid_n() const { return grid_n_; }
  const IndexRange& input_window() const { return input_; }
  const IndexRange& output_window() const { return output_; }
  int64_t half_width() const { return half_; }
  // g[s] for s = -half .. half.
  const std::vector<double>& stencil() const { return stencil_; }
  ConvolutionMode mode() const { return mode_; }

 private:
  int grid_n_;
  IndexRange input_;
  IndexRange output_;
  int64_t half_;
  std::vector<double> stencil_;
  ConvolutionMode mode_;
  SparseMatrix matrix_;
};

class ConvolutionOperator2D : public LinearOperator {
 public:
  ConvolutionOperator2D(const Kernel2D& kernel, int grid_n, Rect input,
                        ConvolutionMode mode = ConvolutionMode::kSeparable);

  std::size_t rows() const override { return output_.size(); }
  std::size_t cols() const override { return input_.size(); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply_transpose(std::span<const double> y, std::span<double> x) const override;
  SparseMatrix to_sparse() const override;
  void apply_abs_power(double p, std::span<const double> x, std::span<double> y) const override;
  void apply_abs_power_transpose(double p, std::span<const double> y,
                                 std::span<double> x) const override;

  int grid_n() const { return grid_n_; }
  const Rect& input_window() const { return input_; }
  const Rect& output_window() const { return output_; }
  int64_t half_width() const { return half_; }
  const std::vector<double>& stencil_1d() const { return stencil_; }
  ConvolutionMode mode() const { return mode_; }

 private:
  void apply_separable(const std::vector<double>& stencil, std::span<const double> x,
                       std::span<double> y) const;
  void apply_separable_transpose(const std::vector<double>& stencil, std::span<const double> y,
                                 std::span<double> x) const;

  int grid_n_;
  Rect input_;
  Rect output_;
  int64_t half_;
  std::vector<double> stencil_;
  ConvolutionMode mode_;
  SparseMatrix matrix_;
};

// Dense result over input.dilated(stencil half width).
std::vector<double> convolve(const SpikeTrain& x, const Kernel& kernel);
std::vector<double> convolve(const std::vector<double>& x, IndexRange window,
                             const Kernel& kernel, int grid_n);
std::vector<double> convolve_2d(const SpikeTrain2D& x, const Kernel2D& kernel);
std::vector<double> convolve_2d(const std::vector<double>& x, Rect window,
                                const Kernel2D& kernel, int grid_n);

enum class NoiseFamily { kGaussian, kUniform };

std::string_view noise_name(NoiseFamily family);
NoiseFamily parse_noise(std::string_view name);

struct Measurement {
  int grid_n = 1;
  IndexRange window;
  std::vector<double> y;
  std::vector<double> noise;  // realized, ||noise||_1 = delta
  double delta = 0.0;
  double snr_db = std::numeric_limits<double>::infinity();
  std::string kernel;
  double sigma = 0.0;
  uint64_t seed = 0;
};

struct Measurement2D {
  int grid_n = 1;
  Rect window;
  std::vector<double> y;  // row-major
  std::vector<double> noise;
  double delta = 0.0;
  double snr_db = std::numeric_limits<double>::infinity();
  std::string kernel;
  double sigma = 0.0;
  uint64_t seed = 0;
};

// i.i.d. draws rescaled to ||noise||_1 = delta exactly; y = clean + noise.
// Window, N and kernel fields are left for the caller.
Measurement add_noise(const std::vector<double>& clean, double delta, NoiseFamily family,
                      uint64_t seed);

Measurement measure(const SpikeTrain& x, const Kernel& kernel, double delta, NoiseFamily family,
                    uint64_t seed);
Measurement2D measure_2d(const SpikeTrain2D& x, const Kernel2D& kernel, double delta,
                         NoiseFamily family, uint64_t seed);

// Rows "k,y".
void write_csv(std::ostream& os, const Measurement& m);
// Rows "k1,k2,y".
void write_csv(std::ostream& os, const Measurement2D& m);
void to_json(nlohmann::json& j, const Measurement& m);
void to_json(nlohmann::json& j, const Measurement2D& m);

}  // namespace pulserec
