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

// Rayleigh regularity of grid supports.
//
// In 1D a set is (d, r)-regular when every open interval of length d holds at
// most r points. In 2D the set must split into r disjoint subsets whose
// points are pairwise at l-infinity distance >= d. Points at distance exactly
// d count as separated in both cases.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pulserec/grid.hpp"
#include "pulserec/spike_train.hpp"

namespace pulserec {

struct RegularityParams {
  double d = 0.0;  // interval length in t units, d = nu * sigma
  int r = 1;
  double nu = 0.0;
  double sigma = 0.0;

  static RegularityParams from_separation(double nu, double sigma, int r);
};

// Relative slack used when comparing a distance with d.
inline constexpr double kSeparationSlack = 1e-9;

// Max number of points in any open interval of length d. Empty support gives 0.
std::size_t rayleigh_regularity_1d(std::span<const double> support, double d);
std::size_t rayleigh_regularity_1d(std::span<const int64_t> indices, int grid_n, double d);

using Point2 = std::pair<double, double>;

double linf_distance(const Point2& a, const Point2& b);

enum class DecompositionMode {
  kExact,   // backtracking over the conflict graph; throws CapExceeded above the cap
  kGreedy,  // first-fit by decreasing degree; failure is not a proof
  kAuto,    // exact up to the cap, greedy beyond
};

inline constexpr std::size_t kExactDecompositionCap = 24;

struct Decomposition {
  bool success = false;
  // True when success == false is a proof that no r-subset split exists.
  bool exhaustive = false;
  std::vector<std::vector<std::size_t>> subsets;  // indices into the input
};

Decomposition decompose_2d(std::span<const Point2> points, double d, int r,
                           DecompositionMode mode = DecompositionMode::kAuto);

// Re-checks a decomposition: disjoint, covering, and separated within subsets.
bool validate_decomposition(std::span<const Point2> points, double d,
                            const Decomposition& decomposition);

struct SupportDraw {
  std::vector<int64_t> indices;  // sorted
  bool reached_target = false;
  std::size_t attempts = 0;
};

struct SupportDraw2D {
  std::vector<GridPoint> points;
  bool reached_target = false;
  std::size_t attempts = 0;
};

// Sequentially adds uniform grid points, rejecting any that would break
// (d, r) regularity, until `target` points are placed or attempts run out.
SupportDraw generate_regular_support(const RegularityParams& params, std::size_t target,
                                     IndexRange window, int grid_n, uint64_t seed,
                                     std::size_t max_attempts = 100000);

SupportDraw2D generate_regular_support_2d(const RegularityParams& params, std::size_t target,
                                          Rect window, int grid_n, uint64_t seed,
                                          std::size_t max_attempts = 100000);

// i.i.d. normal(0, sd^2); absolute values when `positive`.
std::vector<double> draw_amplitudes(std::size_t count, double sd, bool positive, uint64_t seed);

}  // namespace pulserec
