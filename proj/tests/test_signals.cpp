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
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "pulserec/error.hpp"
#include "pulserec/regularity.hpp"
#include "pulserec/rng.hpp"
#include "pulserec/spike_train.hpp"

using namespace pulserec;

namespace {

// Brute force: every window [a, a + d) anchored at a support point.
std::size_t brute_regularity(std::vector<double> t, double d) {
  std::size_t best = 0;
  for (double a : t) {
    std::size_t c = 0;
    for (double s : t) {
      if (s >= a && s < a + d - 1e-12) ++c;
    }
    best = std::max(best, c);
  }
  return best;
}

bool pairwise_separated(const std::vector<Point2>& p, double d) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (linf_distance(p[i], p[j]) < d) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("rayleigh regularity in 1D") {
  std::vector<double> a{0.0, 0.05, 0.2};
  CHECK(rayleigh_regularity_1d(a, 0.1) == 2);
  std::vector<double> b{0.0};
  CHECK(rayleigh_regularity_1d(b, 7.0) == 1);
  std::vector<double> c{0.0, 0.2, 0.4};
  CHECK(rayleigh_regularity_1d(c, 0.1) == 1);
  std::vector<double> e;
  CHECK(rayleigh_regularity_1d(e, 0.1) == 0);
  // Distance exactly d counts as separated.
  std::vector<double> f{0.0, 0.1};
  CHECK(rayleigh_regularity_1d(f, 0.1) == 1);
}

TEST_CASE("rayleigh regularity matches brute force and is monotone in d") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> k(-100, 100);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> t;
    for (int i = 0; i < 12; ++i) t.push_back(k(rng) / 100.0);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    std::size_t prev = 0;
    for (double d : {0.01, 0.05, 0.13, 0.3, 0.7}) {
      const auto r = rayleigh_regularity_1d(t, d);
      CHECK(r == brute_regularity(t, d));
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("decompose_2d small cases") {
  std::vector<Point2> two{{0, 0}, {0.5, 0}};
  auto d = decompose_2d(two, 1.0, 2);
  REQUIRE(d.success);
  CHECK(d.subsets.size() == 2);
  CHECK(validate_decomposition(two, 1.0, d));

  std::vector<Point2> three{{0, 0}, {2, 0}, {0, 2}};
  auto e = decompose_2d(three, 1.0, 1);
  REQUIRE(e.success);
  CHECK(e.subsets.size() == 1);
  CHECK(e.subsets[0].size() == 3);
}

TEST_CASE("every square holds four points yet no split into four exists") {
  // A centre within d of seven ring points, no three of which are pairwise
  // separated: the ring needs four subsets and the centre a fifth.
  const double d = 10.0;
  std::vector<Point2> p{{0, 0}, {6, 4}, {-1, 6}, {-6, 0}, {-6, -3}, {-2, -6}, {6, -5}, {6, 0}};
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(linf_distance(p[0], p[i]) < d);
  for (std::size_t i = 1; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      for (std::size_t k = j + 1; k < p.size(); ++k) {
        CHECK_FALSE(pairwise_separated({p[i], p[j], p[k]}, d));
      }
    }
  }
  std::size_t worst = 0;
  for (const auto& a : p) {
    for (const auto& b : p) {
      std::size_t c = 0;
      for (const auto& q : p) {
        if (q.first >= a.first && q.first < a.first + d && q.second >= b.second &&
            q.second < b.second + d) {
          ++c;
        }
      }
      worst = std::max(worst, c);
    }
  }
  CHECK(worst <= 4);
  const auto four = decompose_2d(p, d, 4, DecompositionMode::kExact);
  CHECK_FALSE(four.success);
  CHECK(four.exhaustive);
  const auto five = decompose_2d(p, d, 5, DecompositionMode::kExact);
  CHECK(five.success);
  CHECK(validate_decomposition(p, d, five));
}

TEST_CASE("r = 1 decomposition iff pairwise separated") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> k(-6, 6);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Point2> p;
    for (int i = 0; i < 5; ++i) p.emplace_back(k(rng) * 0.5, k(rng) * 0.5);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    const auto d = decompose_2d(p, 1.0, 1);
    CHECK(d.success == pairwise_separated(p, 1.0));
    if (d.success) CHECK(validate_decomposition(p, 1.0, d));
  }
}

TEST_CASE("exact mode enforces the cap") {
  std::vector<Point2> p;
  for (int i = 0; i < 30; ++i) p.emplace_back(i * 2.0, 0.0);
  CHECK_THROWS_AS(decompose_2d(p, 1.0, 1, DecompositionMode::kExact), CapExceeded);
  const auto g = decompose_2d(p, 1.0, 1, DecompositionMode::kAuto);
  CHECK(g.success);
  CHECK(validate_decomposition(p, 1.0, g));
}

TEST_CASE("generated supports are regular") {
  const auto p1 = RegularityParams::from_separation(0.5, 0.1, 1);
  const auto s1 = generate_regular_support(p1, 5, {-100, 100}, 100, 3);
  REQUIRE(s1.reached_target);
  CHECK(s1.indices.size() == 5);
  CHECK(rayleigh_regularity_1d(s1.indices, 100, p1.d) <= 1);

  const auto p2 = RegularityParams::from_separation(0.5, 0.1, 2);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = generate_regular_support(p2, 8, {-100, 100}, 100, seed);
    CHECK(rayleigh_regularity_1d(s.indices, 100, p2.d) <= 2);
  }
  const auto one = generate_regular_support(p2, 1, {-100, 100}, 100, 99);
  CHECK(one.reached_target);
  CHECK(one.indices.size() == 1);
}

TEST_CASE("generation is deterministic and reports shortfall") {
  const auto p = RegularityParams::from_separation(0.5, 0.1, 1);
  const auto a = generate_regular_support(p, 6, {-100, 100}, 100, 42);
  const auto b = generate_regular_support(p, 6, {-100, 100}, 100, 42);
  CHECK(a.indices == b.indices);
  // A window of 11 points at spacing 0.05 holds at most 3 separated points.
  const auto c = generate_regular_support(p, 10, {-5, 5}, 100, 1, 2000);
  CHECK_FALSE(c.reached_target);
  CHECK(c.indices.size() <= 3);
}

TEST_CASE("generated 2D supports decompose") {
  const auto p = RegularityParams::from_separation(0.8, 0.1, 2);
  const Rect w{{-32, 31}, {-32, 31}};
  const auto s = generate_regular_support_2d(p, 6, w, 32, 5);
  REQUIRE(s.reached_target);
  std::vector<Point2> pts;
  for (const auto& [a, b] : s.points) pts.emplace_back(a / 32.0, b / 32.0);
  const auto d = decompose_2d(pts, p.d, 2);
  CHECK(d.success);
  CHECK(validate_decomposition(pts, p.d, d));
}

TEST_CASE("amplitudes") {
  const auto a = draw_amplitudes(1000, 10.0, true, 1);
  CHECK(std::all_of(a.begin(), a.end(), [](double v) { return v > 0.0; }));
  CHECK(draw_amplitudes(50, 10.0, false, 9) == draw_amplitudes(50, 10.0, false, 9));
  const auto s = draw_amplitudes(10000, 10.0, false, 2);
  double m = 0.0, v = 0.0;
  for (double x : s) m += x;
  m /= s.size();
  for (double x : s) v += (x - m) * (x - m);
  const double sd = std::sqrt(v / (s.size() - 1));
  CHECK(std::abs(sd - 10.0) <= 0.5);
  // Positive draws are the absolute values of the signed draws.
  const auto sp = draw_amplitudes(20, 10.0, true, 4);
  const auto ss = draw_amplitudes(20, 10.0, false, 4);
  for (std::size_t i = 0; i < 20; ++i) CHECK(sp[i] == std::abs(ss[i]));
}

TEST_CASE("spike train basics") {
  SpikeTrain x(100, {-10, 10}, {5, -3}, {2.0, 1.5});
  CHECK(x.indices() == std::vector<int64_t>{-3, 5});
  CHECK(x.amplitudes() == std::vector<double>{1.5, 2.0});
  CHECK(x.l1_norm() == 3.5);
  CHECK(x.positive());
  const auto dense = x.dense();
  CHECK(dense.size() == 21);
  CHECK(dense[7] == 1.5);
  const auto back = SpikeTrain::from_dense(100, {-10, 10}, dense);
  CHECK(back.indices() == x.indices());
  CHECK_THROWS_AS(SpikeTrain(100, {-10, 10}, {11}, {1.0}), DimensionError);
  CHECK_THROWS_AS(SpikeTrain(100, {-10, 10}, {1, 1}, {1.0, 2.0}), InvalidParameter);
}

TEST_CASE("derived seeds differ by label and are stable") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
}
