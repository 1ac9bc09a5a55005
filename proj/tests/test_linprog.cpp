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
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pulserec/error.hpp"
#include "pulserec/linprog.hpp"

using namespace pulserec;

namespace {

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& d) {
  SparseMatrix s(d.rows(), d.cols());
  std::vector<Eigen::Triplet<double, int64_t>> t;
  for (int i = 0; i < d.rows(); ++i) {
    for (int j = 0; j < d.cols(); ++j) {
      if (d(i, j) != 0.0) t.emplace_back(i, j, d(i, j));
    }
  }
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

oracle::Rel to_rel(Sense s) {
  return s == Sense::kLe ? oracle::Rel::kLe : (s == Sense::kEq ? oracle::Rel::kEq : oracle::Rel::kGe);
}

struct RandomLP {
  Eigen::MatrixXd a;
  Eigen::VectorXd b, c;
  std::vector<Sense> sense;
};

RandomLP random_lp(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  std::uniform_int_distribution<int> pick(0, 2);
  RandomLP lp{Eigen::MatrixXd(m, n), Eigen::VectorXd(m), Eigen::VectorXd(n), {}};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) lp.a(i, j) = u(rng);
    lp.b(i) = u(rng) * 2.0;
    const int p = pick(rng);
    lp.sense.push_back(p == 0 ? Sense::kLe : (p == 1 ? Sense::kGe : (u(rng) > 0.6 ? Sense::kEq : Sense::kLe)));
  }
  for (int j = 0; j < n; ++j) lp.c(j) = pos(rng);
  return lp;
}

LinearProgram to_program(const RandomLP& r) {
  return make_lp(dense_to_sparse(r.a), std::vector<double>(r.c.data(), r.c.data() + r.c.size()),
                 std::vector<double>(r.b.data(), r.b.data() + r.b.size()), r.sense);
}

}  // namespace

TEST_CASE("simplex on textbook programs") {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  auto lp = make_lp(dense_to_sparse(a), {1, 1}, {1}, {Sense::kGe});
  auto s = solve_simplex(lp);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd p(1, 1);
  p << 1;
  auto pinned = make_lp(dense_to_sparse(p), {-1}, {0}, {Sense::kLe});
  auto sp = solve_simplex(pinned);
  REQUIRE(sp.optimal());
  CHECK(sp.objective == 0.0);
  CHECK(sp.x[0] == 0.0);
}

TEST_CASE("simplex status flags") {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  auto infeasible = make_lp(dense_to_sparse(a), {1}, {1, 2}, {Sense::kLe, Sense::kGe});
  CHECK(solve_simplex(infeasible).status == LPStatus::kInfeasible);
  Eigen::MatrixXd b(1, 2);
  b << 1, -1;
  auto unbounded = make_lp(dense_to_sparse(b), {0, -1}, {1}, {Sense::kLe});
  CHECK(solve_simplex(unbounded).status == LPStatus::kUnbounded);
  SimplexOptions tight;
  tight.max_iter = 1;
  Eigen::MatrixXd c(3, 3);
  c << 1, 2, 1, 3, 1, 1, 1, 1, 4;
  auto lp = make_lp(dense_to_sparse(c), {-1, -1, -1}, {4, 5, 6}, {Sense::kLe, Sense::kLe, Sense::kLe});
  CHECK(solve_simplex(lp, tight).status == LPStatus::kIterationLimit);
}

TEST_CASE("simplex matches vertex enumeration on random small programs") {
  std::mt19937_64 rng(2024);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto r = random_lp(rng, 4, 6);
    std::vector<oracle::Rel> rel;
    for (auto s : r.sense) rel.push_back(to_rel(s));
    const auto ref = oracle::vertex_enumeration(r.a, r.b, rel, r.c);
    const auto sol = solve_simplex(to_program(r));
    CAPTURE(trial);
    if (!ref) {
      CHECK(sol.status == LPStatus::kInfeasible);
      continue;
    }
    ++feasible;
    REQUIRE(sol.optimal());
    CHECK(std::abs(sol.objective - *ref) <= 1e-8 * (1.0 + std::abs(*ref)));
  }
  CHECK(feasible >= 20);
}

TEST_CASE("simplex duals satisfy complementary slackness") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto r = random_lp(rng, 5, 7);
    const auto lp = to_program(r);
    const auto sol = solve_simplex(lp);
    if (!sol.optimal()) continue;
    // Reduced costs nonnegative, zero where x > 0.
    Eigen::Map<const Eigen::VectorXd> y(sol.y.data(), sol.y.size());
    Eigen::Map<const Eigen::VectorXd> x(sol.x.data(), sol.x.size());
    const Eigen::VectorXd red = r.c - r.a.transpose() * y;
    for (int j = 0; j < red.size(); ++j) {
      CHECK(red(j) >= -1e-8);
      CHECK(std::abs(red(j) * x(j)) <= 1e-8);
    }
    const Eigen::VectorXd slack = r.a * x - r.b;
    for (int i = 0; i < slack.size(); ++i) {
      CHECK(std::abs(slack(i) * y(i)) <= 1e-8);
      if (r.sense[i] == Sense::kLe) CHECK(y(i) <= 1e-12);
      if (r.sense[i] == Sense::kGe) CHECK(y(i) >= -1e-12);
    }
    // Strong duality.
    CHECK(std::abs(r.c.dot(x) - r.b.dot(y)) <= 1e-8 * (1 + std::abs(sol.objective)));
  }
}

TEST_CASE("simplex phase two objective never increases") {
  std::mt19937_64 rng(8);
  SimplexOptions o;
  o.record_history = true;
  for (int trial = 0; trial < 20; ++trial) {
    const auto sol = solve_simplex(to_program(random_lp(rng, 6, 8)), o);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& h : sol.history) {
      if (h.phase != 2) continue;
      CHECK(h.objective <= prev + 1e-9 * (1 + std::abs(prev)));
      prev = h.objective;
    }
  }
}

TEST_CASE("splitting agrees with simplex") {
  std::mt19937_64 rng(99);
  int compared = 0;
  for (int trial = 0; trial < 40 && compared < 15; ++trial) {
    const auto r = random_lp(rng, 5, 8);
    const auto lp = to_program(r);
    const auto s = solve_simplex(lp);
    if (!s.optimal()) continue;
    const auto p = solve_splitting(lp);
    CAPTURE(trial);
    REQUIRE(p.optimal());
    CHECK(std::abs(p.objective - s.objective) <= 1e-5 * (1 + std::abs(s.objective)));
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("splitting: zero objective with the origin feasible") {
  Eigen::MatrixXd a(2, 3);
  a << 1, 2, 3, -1, 1, 0;
  const auto lp = make_lp(dense_to_sparse(a), {0, 0, 0}, {4, 1}, {Sense::kLe, Sense::kLe});
  const auto p = solve_splitting(lp);
  REQUIRE(p.optimal());
  CHECK(p.objective == doctest::Approx(0.0));
  CHECK(lp.primal_violation(p.x) <= 1e-6);
}

TEST_CASE("splitting flags an infeasible budget") {
  // x1 + x2 <= 1 and x1 + x2 >= 3 cannot both hold.
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  const auto lp = make_lp(dense_to_sparse(a), {1, 1}, {1, 3}, {Sense::kLe, Sense::kGe});
  SplittingOptions o;
  o.max_iter = 20000;
  o.record_history = true;
  const auto p = solve_splitting(lp, o);
  CHECK_FALSE(p.optimal());
  REQUIRE(!p.history.empty());
  CHECK(p.history.back().primal_residual > 1e-3);
}

TEST_CASE("malformed programs are rejected") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0, 0, 1;
  CHECK_THROWS_AS(make_lp(dense_to_sparse(a), {1, 1, 1}, {1, 1}, {Sense::kLe, Sense::kLe}),
                  DimensionError);
  CHECK_THROWS_AS(make_lp(dense_to_sparse(a), {1, 1}, {1}, {Sense::kLe}), DimensionError);
}

TEST_CASE("history export") {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  SimplexOptions o;
  o.record_history = true;
  const auto s = solve_simplex(make_lp(dense_to_sparse(a), {1, 2}, {1}, {Sense::kGe}), o);
  std::ostringstream os;
  write_history_csv(os, s);
  CHECK(os.str().rfind("iteration,phase,objective,primal_residual,dual_residual,gap\n", 0) == 0);
}
