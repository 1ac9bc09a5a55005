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

#include "pulserec/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "pulserec/error.hpp"
#include "pulserec/rng.hpp"

namespace pulserec {
namespace {

using Triplet = Eigen::Triplet<double, int64_t>;

void check_sizes(std::size_t x, std::size_t want_x, std::size_t y, std::size_t want_y,
                 const char* where) {
  if (x != want_x || y != want_y) throw DimensionError(where);
}

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::vector<double> powered(const std::vector<double>& stencil, double p) {
  std::vector<double> out(stencil.size());
  for (std::size_t s = 0; s < stencil.size(); ++s) out[s] = std::pow(stencil[s], p);
  return out;
}

// Full linear convolution; y.size() == x.size() + stencil.size() - 1.
void convolve_1d(const std::vector<double>& stencil, std::span<const double> x,
                 std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  const std::size_t width = stencil.size();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    double* out = y.data() + j;
    for (std::size_t s = 0; s < width; ++s) out[s] += stencil[s] * xj;
  }
}

void correlate_1d(const std::vector<double>& stencil, std::span<const double> y,
                  std::span<double> x) {
  std::fill(x.begin(), x.end(), 0.0);
  const std::size_t n = x.size();
  for (std::size_t s = 0; s < stencil.size(); ++s) {
    const double g = stencil[s];
    if (g == 0.0) continue;
    const double* in = y.data() + s;
    for (std::size_t j = 0; j < n; ++j) x[j] += g * in[j];
  }
}

}  // namespace

ConvolutionOperator::ConvolutionOperator(const Kernel& kernel, int grid_n, IndexRange input,
                                         ConvolutionMode mode)
    : grid_n_(grid_n), input_(input), mode_(mode) {
  if (grid_n < 1) throw InvalidParameter("N must be >= 1");
  if (input.empty()) throw InvalidParameter("convolution input window is empty");
  if (mode == ConvolutionMode::kSeparable) {
    throw InvalidParameter("separable mode applies to 2D operators only");
  }
  half_ = stencil_half_width(kernel, grid_n);
  stencil_ = sample(kernel, grid_n, {-half_, half_});
  output_ = input.dilated(half_);
  if (mode_ == ConvolutionMode::kMatrix) matrix_ = to_sparse();
}

void ConvolutionOperator::apply(std::span<const double> x, std::span<double> y) const {
  check_sizes(x.size(), cols(), y.size(), rows(), "ConvolutionOperator::apply");
  if (mode_ == ConvolutionMode::kMatrix) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    yv.noalias() = matrix_ * xv;
    return;
  }
  convolve_1d(stencil_, x, y);
}

void ConvolutionOperator::apply_transpose(std::span<const double> y, std::span<double> x) const {
  check_sizes(x.size(), cols(), y.size(), rows(), "ConvolutionOperator::apply_transpose");
  if (mode_ == ConvolutionMode::kMatrix) {
    Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    Eigen::Map<Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    xv.noalias() = matrix_.transpose() * yv;
    return;
  }
  correlate_1d(stencil_, y, x);
}

void ConvolutionOperator::apply_abs_power(double p, std::span<const double> x,
                                          std::span<double> y) const {
  check_sizes(x.size(), cols(), y.size(), rows(), "ConvolutionOperator::apply_abs_power");
  convolve_1d(powered(stencil_, p), x, y);
}

void ConvolutionOperator::apply_abs_power_transpose(double p, std::span<const double> y,
                                                    std::span<double> x) const {
  check_sizes(x.size(), cols(), y.size(), rows(),
              "ConvolutionOperator::apply_abs_power_transpose");
  correlate_1d(powered(stencil_, p), y, x);
}

SparseMatrix ConvolutionOperator::to_sparse() const {
  std::vector<Triplet> entries;
  entries.reserve(cols() * stencil_.size());
  for (std::size_t j = 0; j < cols(); ++j) {
    for (std::size_t s = 0; s < stencil_.size(); ++s) {
      if (stencil_[s] != 0.0) {
        entries.emplace_back(static_cast<int64_t>(j + s), static_cast<int64_t>(j), stencil_[s]);
      }
    }
  }
  SparseMatrix out(static_cast<int64_t>(rows()), static_cast<int64_t>(cols()));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

ConvolutionOperator2D::ConvolutionOperator2D(const Kernel2D& kernel, int grid_n, Rect input,
                                             ConvolutionMode mode)
    : grid_n_(grid_n), input_(input), mode_(mode) {
  if (grid_n < 1) throw InvalidParameter("N must be >= 1");
  if (input.rows.empty() || input.cols.empty()) {
    throw InvalidParameter("convolution input window is empty");
  }
  half_ = stencil_half_width(kernel.factor(), grid_n);
  stencil_ = sample(kernel.factor(), grid_n, {-half_, half_});
  output_ = input.dilated(half_);
  if (mode_ == ConvolutionMode::kMatrix) matrix_ = to_sparse();
}

void ConvolutionOperator2D::apply(std::span<const double> x, std::span<double> y) const {
  check_sizes(x.size(), cols(), y.size(), rows(), "ConvolutionOperator2D::apply");
  switch (mode_) {
    case ConvolutionMode::kSeparable:
      apply_separable(stencil_, x, y);
      return;
    case ConvolutionMode::kMatrix: {
      Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
      Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
      yv.noalias() = matrix_ * xv;
      return;
    }
    case ConvolutionMode::kDirect:
      break;
  }
  std::fill(y.begin(), y.end(), 0.0);
  const std::size_t in_cols = input_.cols.size();
  const std::size_t out_cols = output_.cols.size();
  const std::size_t width = stencil_.size();
  for (std::size_t a = 0; a < input_.rows.size(); ++a) {
    for (std::size_t b = 0; b < in_cols; ++b) {
      const double xv = x[a * in_cols + b];
      if (xv == 0.0) continue;
      for (std::size_t s1 = 0; s1 < width; ++s1) {
        double* out = y.data() + (a + s1) * out_cols + b;
        const double w1 = stencil_[s1] * xv;
        for (std::size_t s2 = 0; s2 < width; ++s2) out[s2] += w1 * stencil_[s2];
      }
    }
  }
}

void ConvolutionOperator2D::apply_transpose(std::span<const double> y, std::span<double> x) const {
  check_sizes(x.size(), cols(), y.size(), rows(), "ConvolutionOperator2D::apply_transpose");
  switch (mode_) {
    case ConvolutionMode::kSeparable:
      apply_separable_transpose(stencil_, y, x);
      return;
    case ConvolutionMode::kMatrix: {
      Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
      Eigen::Map<Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
      xv.noalias() = matrix_.transpose() * yv;
      return;
    }
    case ConvolutionMode::kDirect:
      break;
  }
  const std::size_t in_cols = input_.cols.size();
  const std::size_t out_cols = output_.cols.size();
  const std::size_t width = stencil_.size();
  for (std::size_t a = 0; a < input_.rows.size(); ++a) {
    for (std::size_t b = 0; b < in_cols; ++b) {
      double acc = 0.0;
      for (std::size_t s1 = 0; s1 < width; ++s1) {
        const double* in = y.data() + (a + s1) * out_cols + b;
        double row = 0.0;
        for (std::size_t s2 = 0; s2 < width; ++s2) row += stencil_[s2] * in[s2];
        acc += stencil_[s1] * row;
      }
      x[a * in_cols + b] = acc;
    }
  }
}

// Columns first (within each input row), then rows.
void ConvolutionOperator2D::apply_separable(const std::vector<double>& stencil,
                                            std::span<const double> x, std::span<double> y) const {
  const std::size_t in_rows = input_.rows.size();
  const std::size_t in_cols = input_.cols.size();
  const std::size_t out_cols = output_.cols.size();
  const std::size_t width = stencil.size();
  std::vector<double> tmp(in_rows * out_cols, 0.0);
  for (std::size_t a = 0; a < in_rows; ++a) {
    double* t = tmp.data() + a * out_cols;
    for (std::size_t b = 0; b < in_cols; ++b) {
      const double xv = x[a * in_cols + b];
      if (xv == 0.0) continue;
      for (std::size_t s = 0; s < width; ++s) t[b + s] += stencil[s] * xv;
    }
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t a = 0; a < in_rows; ++a) {
    const double* t = tmp.data() + a * out_cols;
    for (std::size_t s = 0; s < width; ++s) {
      const double g = stencil[s];
      double* out = y.data() + (a + s) * out_cols;
      for (std::size_t b = 0; b < out_cols; ++b) out[b] += g * t[b];
    }
  }
}

void ConvolutionOperator2D::apply_separable_transpose(const std::vector<double>& stencil,
                                                      std::span<const double> y,
                                                      std::span<double> x) const {
  const std::size_t in_rows = input_.rows.size();
  const std::size_t in_cols = input_.cols.size();
  const std::size_t out_cols = output_.cols.size();
  const std::size_t width = stencil.size();
  std::vector<double> tmp(in_rows * out_cols, 0.0);
  for (std::size_t a = 0; a < in_rows; ++a) {
    double* t = tmp.data() + a * out_cols;
    for (std::size_t s = 0; s < width; ++s) {
      const double g = stencil[s];
      const double* in = y.data() + (a + s) * out_cols;
      for (std::size_t b = 0; b < out_cols; ++b) t[b] += g * in[b];
    }
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t a = 0; a < in_rows; ++a) {
    const double* t = tmp.data() + a * out_cols;
    double* out = x.data() + a * in_cols;
    for (std::size_t s = 0; s < width; ++s) {
      const double g = stencil[s];
      if (g == 0.0) continue;
      for (std::size_t b = 0; b < in_cols; ++b) out[b] += g * t[b + s];
    }
  }
}

void ConvolutionOperator2D::apply_abs_power(double p, std::span<const double> x,
                                            std::span<double> y) const {
  check_sizes(x.size(), cols(), y.size(), rows(), "ConvolutionOperator2D::apply_abs_power");
  apply_separable(powered(stencil_, p), x, y);
}

void ConvolutionOperator2D::apply_abs_power_transpose(double p, std::span<const double> y,
                                                      std::span<double> x) const {
  check_sizes(x.size(), cols(), y.size(), rows(),
              "ConvolutionOperator2D::apply_abs_power_transpose");
  apply_separable_transpose(powered(stencil_, p), y, x);
}

SparseMatrix ConvolutionOperator2D::to_sparse() const {
  const std::size_t in_cols = input_.cols.size();
  const std::size_t out_cols = output_.cols.size();
  const std::size_t width = stencil_.size();
  std::vector<Triplet> entries;
  entries.reserve(cols() * width * width);
  for (std::size_t a = 0; a < input_.rows.size(); ++a) {
    for (std::size_t b = 0; b < in_cols; ++b) {
      const auto col = static_cast<int64_t>(a * in_cols + b);
      for (std::size_t s1 = 0; s1 < width; ++s1) {
        for (std::size_t s2 = 0; s2 < width; ++s2) {
          const double v = stencil_[s1] * stencil_[s2];
          if (v == 0.0) continue;
          entries.emplace_back(static_cast<int64_t>((a + s1) * out_cols + b + s2), col, v);
        }
      }
    }
  }
  SparseMatrix out(static_cast<int64_t>(rows()), static_cast<int64_t>(cols()));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

std::vector<double> convolve(const SpikeTrain& x, const Kernel& kernel) {
  return convolve(x.dense(), x.window(), kernel, x.grid_n());
}

std::vector<double> convolve(const std::vector<double>& x, IndexRange window,
                             const Kernel& kernel, int grid_n) {
  if (x.size() != window.size()) throw DimensionError("convolve: signal does not match window");
  ConvolutionOperator op(kernel, grid_n, window);
  std::vector<double> y(op.rows());
  op.apply(x, y);
  return y;
}

std::vector<double> convolve_2d(const SpikeTrain2D& x, const Kernel2D& kernel) {
  return convolve_2d(x.dense(), x.window(), kernel, x.grid_n());
}

std::vector<double> convolve_2d(const std::vector<double>& x, Rect window,
                                const Kernel2D& kernel, int grid_n) {
  if (x.size() != window.size()) throw DimensionError("convolve_2d: signal does not match window");
  ConvolutionOperator2D op(kernel, grid_n, window);
  std::vector<double> y(op.rows());
  op.apply(x, y);
  return y;
}

std::string_view noise_name(NoiseFamily family) {
  return family == NoiseFamily::kGaussian ? "gaussian" : "uniform";
}

NoiseFamily parse_noise(std::string_view name) {
  if (name == "gaussian" || name == "normal") return NoiseFamily::kGaussian;
  if (name == "uniform") return NoiseFamily::kUniform;
  throw InvalidParameter("unknown noise family '" + std::string(name) + "'");
}

Measurement add_noise(const std::vector<double>& clean, double delta, NoiseFamily family,
                      uint64_t seed) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidParameter("noise budget delta must be finite and >= 0");
  }
  Measurement m;
  m.window = {0, static_cast<int64_t>(clean.size()) - 1};
  m.delta = delta;
  m.seed = seed;
  m.noise.assign(clean.size(), 0.0);
  if (delta > 0.0 && !clean.empty()) {
    Rng rng(seed);
    if (family == NoiseFamily::kGaussian) {
      std::normal_distribution<double> dist;
      for (auto& v : m.noise) v = dist(rng);
    } else {
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (auto& v : m.noise) v = dist(rng);
    }
    double l1 = 0.0;
    for (double v : m.noise) l1 += std::abs(v);
    if (l1 == 0.0) {
      m.noise[0] = 1.0;
      l1 = 1.0;
    }
    for (auto& v : m.noise) v *= delta / l1;
  }
  m.y.resize(clean.size());
  double clean2 = 0.0;
  double noise2 = 0.0;
  for (std::size_t k = 0; k < clean.size(); ++k) {
    m.y[k] = clean[k] + m.noise[k];
    clean2 += clean[k] * clean[k];
    noise2 += m.noise[k] * m.noise[k];
  }
  m.snr_db = noise2 > 0.0 ? 10.0 * std::log10(clean2 / noise2)
                          : std::numeric_limits<double>::infinity();
  return m;
}

Measurement measure(const SpikeTrain& x, const Kernel& kernel, double delta, NoiseFamily family,
                    uint64_t seed) {
  ConvolutionOperator op(kernel, x.grid_n(), x.window());
  std::vector<double> clean(op.rows());
  op.apply(x.dense(), clean);
  Measurement m = add_noise(clean, delta, family, seed);
  m.grid_n = x.grid_n();
  m.window = op.output_window();
  m.kernel = std::string(kernel.name());
  m.sigma = kernel.sigma();
  return m;
}

Measurement2D measure_2d(const SpikeTrain2D& x, const Kernel2D& kernel, double delta,
                         NoiseFamily family, uint64_t seed) {
  ConvolutionOperator2D op(kernel, x.grid_n(), x.window());
  std::vector<double> clean(op.rows());
  op.apply(x.dense(), clean);
  Measurement flat = add_noise(clean, delta, family, seed);
  Measurement2D m;
  m.grid_n = x.grid_n();
  m.window = op.output_window();
  m.y = std::move(flat.y);
  m.noise = std::move(flat.noise);
  m.delta = delta;
  m.snr_db = flat.snr_db;
  m.kernel = std::string(kernel.name());
  m.sigma = kernel.sigma();
  m.seed = seed;
  return m;
}

void write_csv(std::ostream& os, const Measurement& m) {
  os << std::setprecision(17) << "k,y\n";
  for (std::size_t i = 0; i < m.y.size(); ++i) {
    os << m.window.lo + static_cast<int64_t>(i) << ',' << m.y[i] << '\n';
  }
}

void write_csv(std::ostream& os, const Measurement2D& m) {
  os << std::setprecision(17) << "k1,k2,y\n";
  const std::size_t cols = m.window.cols.size();
  for (std::size_t i = 0; i < m.y.size(); ++i) {
    os << m.window.rows.lo + static_cast<int64_t>(i / cols) << ','
       << m.window.cols.lo + static_cast<int64_t>(i % cols) << ',' << m.y[i] << '\n';
  }
}

void to_json(nlohmann::json& j, const Measurement& m) {
  j = {{"N", m.grid_n},
       {"window", {m.window.lo, m.window.hi}},
       {"delta", m.delta},
       {"kernel", m.kernel},
       {"sigma", m.sigma},
       {"seed", m.seed},
       {"snr_db", finite_or_null(m.snr_db)},
       {"y", m.y}};
}

void to_json(nlohmann::json& j, const Measurement2D& m) {
  j = {{"N", m.grid_n},
       {"window", {{m.window.rows.lo, m.window.rows.hi}, {m.window.cols.lo, m.window.cols.hi}}},
       {"delta", m.delta},
       {"kernel", m.kernel},
       {"sigma", m.sigma},
       {"seed", m.seed},
       {"snr_db", finite_or_null(m.snr_db)},
       {"y", m.y}};
}

}  // namespace pulserec
