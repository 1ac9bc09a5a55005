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

#include "pulserec/spike_train.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "pulserec/error.hpp"

namespace pulserec {

SpikeTrain::SpikeTrain(int grid_n, IndexRange window, std::vector<int64_t> indices,
                       std::vector<double> amplitudes)
    : grid_n_(grid_n), window_(window) {
  if (grid_n < 1) throw InvalidParameter("N must be >= 1");
  if (indices.size() != amplitudes.size()) {
    throw DimensionError("spike train needs one amplitude per index");
  }
  std::vector<std::size_t> order(indices.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return indices[a] < indices[b]; });
  indices_.reserve(order.size());
  amplitudes_.reserve(order.size());
  for (auto i : order) {
    if (!window.contains(indices[i])) throw DimensionError("spike index outside window");
    if (!indices_.empty() && indices_.back() == indices[i]) {
      throw InvalidParameter("spike indices must be unique");
    }
    indices_.push_back(indices[i]);
    amplitudes_.push_back(amplitudes[i]);
  }
}

bool SpikeTrain::positive() const {
  return std::all_of(amplitudes_.begin(), amplitudes_.end(), [](double c) { return c > 0.0; });
}

std::vector<double> SpikeTrain::locations() const {
  std::vector<double> t(indices_.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(indices_[i]) / grid_n_;
  return t;
}

std::vector<double> SpikeTrain::dense() const {
  std::vector<double> x(window_.size(), 0.0);
  for (std::size_t i = 0; i < indices_.size(); ++i) x[window_.offset(indices_[i])] = amplitudes_[i];
  return x;
}

double SpikeTrain::l1_norm() const {
  double s = 0.0;
  for (double c : amplitudes_) s += std::abs(c);
  return s;
}

SpikeTrain SpikeTrain::from_dense(int grid_n, IndexRange window, const std::vector<double>& x) {
  if (x.size() != window.size()) throw DimensionError("dense signal does not match window");
  std::vector<int64_t> idx;
  std::vector<double> amp;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      idx.push_back(window.lo + static_cast<int64_t>(i));
      amp.push_back(x[i]);
    }
  }
  return SpikeTrain(grid_n, window, std::move(idx), std::move(amp));
}

SpikeTrain2D::SpikeTrain2D(int grid_n, Rect window, std::vector<GridPoint> points,
                           std::vector<double> amplitudes)
    : grid_n_(grid_n), window_(window) {
  if (grid_n < 1) throw InvalidParameter("N must be >= 1");
  if (points.size() != amplitudes.size()) {
    throw DimensionError("spike train needs one amplitude per point");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a] < points[b]; });
  for (auto i : order) {
    if (!window.contains(points[i].first, points[i].second)) {
      throw DimensionError("spike point outside window");
    }
    if (!points_.empty() && points_.back() == points[i]) {
      throw InvalidParameter("spike points must be unique");
    }
    points_.push_back(points[i]);
    amplitudes_.push_back(amplitudes[i]);
  }
}

bool SpikeTrain2D::positive() const {
  return std::all_of(amplitudes_.begin(), amplitudes_.end(), [](double c) { return c > 0.0; });
}

std::vector<std::pair<double, double>> SpikeTrain2D::locations() const {
  std::vector<std::pair<double, double>> t;
  t.reserve(points_.size());
  for (const auto& [k1, k2] : points_) {
    t.emplace_back(static_cast<double>(k1) / grid_n_, static_cast<double>(k2) / grid_n_);
  }
  return t;
}

std::vector<double> SpikeTrain2D::dense() const {
  std::vector<double> x(window_.size(), 0.0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    x[window_.offset(points_[i].first, points_[i].second)] = amplitudes_[i];
  }
  return x;
}

double SpikeTrain2D::l1_norm() const {
  double s = 0.0;
  for (double c : amplitudes_) s += std::abs(c);
  return s;
}

void to_json(nlohmann::json& j, const SpikeTrain& x) {
  j = nlohmann::json{{"N", x.grid_n()},
                     {"window", {x.window().lo, x.window().hi}},
                     {"indices", x.indices()},
                     {"amplitudes", x.amplitudes()}};
}

void from_json(const nlohmann::json& j, SpikeTrain& x) {
  const auto& w = j.at("window");
  x = SpikeTrain(j.at("N").get<int>(), IndexRange{w.at(0).get<int64_t>(), w.at(1).get<int64_t>()},
                 j.at("indices").get<std::vector<int64_t>>(),
                 j.at("amplitudes").get<std::vector<double>>());
}

void to_json(nlohmann::json& j, const SpikeTrain2D& x) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [k1, k2] : x.points()) pts.push_back({k1, k2});
  j = nlohmann::json{{"N", x.grid_n()},
                     {"window",
                      {{x.window().rows.lo, x.window().rows.hi},
                       {x.window().cols.lo, x.window().cols.hi}}},
                     {"points", pts},
                     {"amplitudes", x.amplitudes()}};
}

void write_csv(std::ostream& os, const SpikeTrain& x) {
  os << std::setprecision(17) << "k,t,c\n";
  const auto t = x.locations();
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << x.indices()[i] << ',' << t[i] << ',' << x.amplitudes()[i] << '\n';
  }
}

void write_csv(std::ostream& os, const SpikeTrain2D& x) {
  os << std::setprecision(17) << "k1,k2,t1,t2,c\n";
  const auto t = x.locations();
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << x.points()[i].first << ',' << x.points()[i].second << ',' << t[i].first << ','
       << t[i].second << ',' << x.amplitudes()[i] << '\n';
  }
}

}  // namespace pulserec
