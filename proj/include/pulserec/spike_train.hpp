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

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pulserec/grid.hpp"

namespace pulserec {

// x[k] = sum_m c_m delta[k - k_m] on the grid k / N.
class SpikeTrain {
 public:
  SpikeTrain() = default;
  // Indices need not be sorted; they are sorted together with amplitudes.
  SpikeTrain(int grid_n, IndexRange window, std::vector<int64_t> indices,
             std::vector<double> amplitudes);

  int grid_n() const { return grid_n_; }
  const IndexRange& window() const { return window_; }
  const std::vector<int64_t>& indices() const { return indices_; }
  const std::vector<double>& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return indices_.size(); }
  bool positive() const;

  std::vector<double> locations() const;  // t_m = k_m / N
  std::vector<double> dense() const;      // over window()
  double l1_norm() const;

  static SpikeTrain from_dense(int grid_n, IndexRange window, const std::vector<double>& x);

 private:
  int grid_n_ = 1;
  IndexRange window_;
  std::vector<int64_t> indices_;
  std::vector<double> amplitudes_;
};

using GridPoint = std::pair<int64_t, int64_t>;

class SpikeTrain2D {
 public:
  SpikeTrain2D() = default;
  SpikeTrain2D(int grid_n, Rect window, std::vector<GridPoint> points,
               std::vector<double> amplitudes);

  int grid_n() const { return grid_n_; }
  const Rect& window() const { return window_; }
  const std::vector<GridPoint>& points() const { return points_; }
  const std::vector<double>& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return points_.size(); }
  bool positive() const;

  std::vector<std::pair<double, double>> locations() const;
  std::vector<double> dense() const;  // row-major over window()
  double l1_norm() const;

 private:
  int grid_n_ = 1;
  Rect window_;
  std::vector<GridPoint> points_;
  std::vector<double> amplitudes_;
};

void to_json(nlohmann::json& j, const SpikeTrain& x);
void from_json(const nlohmann::json& j, SpikeTrain& x);
void to_json(nlohmann::json& j, const SpikeTrain2D& x);

// Rows "k,t,c".
void write_csv(std::ostream& os, const SpikeTrain& x);
// Rows "k1,k2,t1,t2,c".
void write_csv(std::ostream& os, const SpikeTrain2D& x);

}  // namespace pulserec
