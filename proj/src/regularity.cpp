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

#include "pulserec/regularity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "pulserec/error.hpp"
#include "pulserec/rng.hpp"

namespace pulserec {
namespace {

bool closer_than(double distance, double d) {
  return distance < d - kSeparationSlack * std::max(1.0, d);
}

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency conflict_graph(std::span<const Point2> points, double d) {
  Adjacency adj(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (closer_than(linf_distance(points[i], points[j]), d)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  return adj;
}

// Backtracking r-colouring with DSATUR vertex choice. New colours are opened
// in increasing order only, which removes colour-permutation symmetry.
class ExactColouring {
 public:
  ExactColouring(const Adjacency& adj, int colours)
      : adj_(adj), colours_(colours), colour_(adj.size(), -1) {}

  bool solve() { return extend(0, 0); }
  const std::vector<int>& colouring() const { return colour_; }

 private:
  std::size_t pick() const {
    std::size_t best = adj_.size();
    int best_sat = -1;
    std::size_t best_deg = 0;
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      if (colour_[v] >= 0) continue;
      uint64_t seen = 0;
      for (auto u : adj_[v]) {
        if (colour_[u] >= 0) seen |= uint64_t{1} << colour_[u];
      }
      const int sat = std::popcount(seen);
      if (sat > best_sat || (sat == best_sat && adj_[v].size() > best_deg)) {
        best = v;
        best_sat = sat;
        best_deg = adj_[v].size();
      }
    }
    return best;
  }

  bool extend(std::size_t coloured, int used) {
    if (coloured == adj_.size()) return true;
    const std::size_t v = pick();
    const int limit = std::min(colours_, used + 1);
    for (int c = 0; c < limit; ++c) {
      const bool clash =
          std::any_of(adj_[v].begin(), adj_[v].end(), [&](auto u) { return colour_[u] == c; });
      if (clash) continue;
      colour_[v] = c;
      if (extend(coloured + 1, std::max(used, c + 1))) return true;
      colour_[v] = -1;
    }
    return false;
  }

  const Adjacency& adj_;
  int colours_;
  std::vector<int> colour_;
};

Decomposition to_decomposition(const std::vector<int>& colour, int r) {
  Decomposition out;
  out.success = true;
  out.subsets.resize(static_cast<std::size_t>(r));
  for (std::size_t v = 0; v < colour.size(); ++v) {
    out.subsets[static_cast<std::size_t>(colour[v])].push_back(v);
  }
  std::erase_if(out.subsets, [](const auto& s) { return s.empty(); });
  return out;
}

Decomposition greedy(const Adjacency& adj, int r) {
  std::vector<std::size_t> order(adj.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return adj[a].size() > adj[b].size(); });
  std::vector<int> colour(adj.size(), -1);
  for (auto v : order) {
    for (int c = 0; c < r; ++c) {
      const bool clash =
          std::any_of(adj[v].begin(), adj[v].end(), [&](auto u) { return colour[u] == c; });
      if (!clash) {
        colour[v] = c;
        break;
      }
    }
    if (colour[v] < 0) return Decomposition{false, false, {}};
  }
  return to_decomposition(colour, r);
}

}  // namespace

RegularityParams RegularityParams::from_separation(double nu, double sigma, int r) {
  if (!(nu > 0.0) || !(sigma > 0.0)) throw InvalidParameter("nu and sigma must be positive");
  if (r < 1) throw InvalidParameter("r must be >= 1");
  return RegularityParams{nu * sigma, r, nu, sigma};
}

std::size_t rayleigh_regularity_1d(std::span<const double> support, double d) {
  if (!(d > 0.0)) throw InvalidParameter("interval length d must be positive");
  std::vector<double> t(support.begin(), support.end());
  std::sort(t.begin(), t.end());
  std::size_t best = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    j = std::max(j, i);
    while (j < t.size() && closer_than(t[j] - t[i], d)) ++j;
    best = std::max(best, j - i);
  }
  return best;
}

std::size_t rayleigh_regularity_1d(std::span<const int64_t> indices, int grid_n, double d) {
  std::vector<double> t(indices.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(indices[i]) / grid_n;
  return rayleigh_regularity_1d(t, d);
}

double linf_distance(const Point2& a, const Point2& b) {
  return std::max(std::abs(a.first - b.first), std::abs(a.second - b.second));
}

Decomposition decompose_2d(std::span<const Point2> points, double d, int r,
                           DecompositionMode mode) {
  if (!(d > 0.0)) throw InvalidParameter("separation d must be positive");
  if (r < 1) throw InvalidParameter("r must be >= 1");
  if (r > 63) throw InvalidParameter("r must be < 64");
  if (points.empty()) return Decomposition{true, true, {}};
  if (mode == DecompositionMode::kExact && points.size() > kExactDecompositionCap) {
    throw CapExceeded("exact 2D decomposition is capped at " +
                      std::to_string(kExactDecompositionCap) + " points");
  }
  const Adjacency adj = conflict_graph(points, d);
  const bool exact = mode == DecompositionMode::kExact ||
                     (mode == DecompositionMode::kAuto && points.size() <= kExactDecompositionCap);
  if (!exact) return greedy(adj, r);

  ExactColouring search(adj, r);
  if (!search.solve()) return Decomposition{false, true, {}};
  auto out = to_decomposition(search.colouring(), r);
  out.exhaustive = true;
  return out;
}

bool validate_decomposition(std::span<const Point2> points, double d,
                            const Decomposition& decomposition) {
  if (!decomposition.success) return false;
  std::vector<int> hits(points.size(), 0);
  for (const auto& subset : decomposition.subsets) {
    for (std::size_t a = 0; a < subset.size(); ++a) {
      if (subset[a] >= points.size()) return false;
      ++hits[subset[a]];
      for (std::size_t b = a + 1; b < subset.size(); ++b) {
        if (closer_than(linf_distance(points[subset[a]], points[subset[b]]), d)) return false;
      }
    }
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

SupportDraw generate_regular_support(const RegularityParams& params, std::size_t target,
                                     IndexRange window, int grid_n, uint64_t seed,
                                     std::size_t max_attempts) {
  if (grid_n < 1) throw InvalidParameter("N must be >= 1");
  if (static_cast<double>(window.size()) / grid_n < params.d) {
    throw InvalidParameter("window shorter than the regularity interval");
  }
  Rng rng(seed);
  std::uniform_int_distribution<int64_t> pick(window.lo, window.hi);
  SupportDraw out;
  while (out.indices.size() < target && out.attempts < max_attempts) {
    ++out.attempts;
    const int64_t k = pick(rng);
    auto pos = std::lower_bound(out.indices.begin(), out.indices.end(), k);
    if (pos != out.indices.end() && *pos == k) continue;
    auto trial = out.indices;
    trial.insert(trial.begin() + (pos - out.indices.begin()), k);
    if (rayleigh_regularity_1d(std::span<const int64_t>(trial), grid_n, params.d) <=
        static_cast<std::size_t>(params.r)) {
      out.indices = std::move(trial);
    }
  }
  out.reached_target = out.indices.size() >= target;
  return out;
}

SupportDraw2D generate_regular_support_2d(const RegularityParams& params, std::size_t target,
                                          Rect window, int grid_n, uint64_t seed,
                                          std::size_t max_attempts) {
  if (grid_n < 1) throw InvalidParameter("N must be >= 1");
  const double side = static_cast<double>(std::min(window.rows.size(), window.cols.size())) / grid_n;
  if (side < params.d) throw InvalidParameter("window shorter than the regularity interval");
  Rng rng(seed);
  std::uniform_int_distribution<int64_t> pick_row(window.rows.lo, window.rows.hi);
  std::uniform_int_distribution<int64_t> pick_col(window.cols.lo, window.cols.hi);
  SupportDraw2D out;
  std::vector<Point2> t;
  while (out.points.size() < target && out.attempts < max_attempts) {
    ++out.attempts;
    const GridPoint k{pick_row(rng), pick_col(rng)};
    if (std::find(out.points.begin(), out.points.end(), k) != out.points.end()) continue;
    t.emplace_back(static_cast<double>(k.first) / grid_n, static_cast<double>(k.second) / grid_n);
    if (decompose_2d(t, params.d, params.r).success) {
      out.points.push_back(k);
    } else {
      t.pop_back();
    }
  }
  out.reached_target = out.points.size() >= target;
  return out;
}

std::vector<double> draw_amplitudes(std::size_t count, double sd, bool positive, uint64_t seed) {
  if (!(sd > 0.0)) throw InvalidParameter("amplitude SD must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, sd);
  std::vector<double> out(count);
  for (auto& c : out) {
    c = normal(rng);
    if (positive) c = std::abs(c);
  }
  return out;
}

}  // namespace pulserec
