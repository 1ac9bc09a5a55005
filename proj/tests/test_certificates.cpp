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
#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "pulserec/certificates.hpp"
#include "pulserec/error.hpp"

using namespace pulserec;

namespace {

// Closed-form Cauchy derivatives, independent of the library evaluators.
double c0(double t) { return 1.0 / (1.0 + t * t); }
double c1(double t) { return -2.0 * t / std::pow(1.0 + t * t, 2); }
double c2(double t) { return (6.0 * t * t - 2.0) / std::pow(1.0 + t * t, 3); }

Eigen::VectorXd reference_coefficients(const std::vector<double>& t, double sigma) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m(2 * n, 2 * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double u = (t[l] - t[k]) / sigma;
      m(l, k) = c0(u);
      m(l, n + k) = c1(u);
      m(n + l, k) = c1(u);
      m(n + l, n + k) = c2(u);
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
  rhs.head(n).setOnes();
  return m.fullPivLu().solve(rhs);
}

}  // namespace

TEST_CASE("single node certificate") {
  for (const auto& g : {make_gaussian(0.1), make_cauchy(0.1)}) {
    const auto c = build_certificate_1d(g, {0.0});
    CHECK(c.a[0] == doctest::Approx(1.0 / g.peak()).epsilon(1e-15));
    CHECK(std::abs(c.b[0]) <= 1e-15);
    const auto v = verify_certificate_1d(c);
    for (const auto& chk : v.checks) {
      CAPTURE(chk.name);
      CHECK(chk.passed);
    }
  }
}

TEST_CASE("symmetric pair gives symmetric a and antisymmetric b") {
  const auto c = build_certificate_1d(make_cauchy(0.1), {-0.04, 0.04});
  CHECK(c.a[0] == doctest::Approx(c.a[1]).epsilon(1e-12));
  CHECK(c.b[0] == doctest::Approx(-c.b[1]).epsilon(1e-12));
  CHECK(std::abs(c.b[0]) > 0.0);
}

TEST_CASE("coefficients match an independent solve") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> gap(0.05, 0.15);
  const auto g = make_cauchy(0.1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> t{0.0};
    const int n = 1 + trial % 7;
    for (int i = 1; i < n; ++i) t.push_back(t.back() + gap(rng));
    const auto c = build_certificate_1d(g, t);
    const auto ref = reference_coefficients(t, 0.1);
    for (int i = 0; i < n; ++i) {
      CHECK(c.a[i] == doctest::Approx(ref(i)).epsilon(1e-9));
      CHECK(c.b[i] == doctest::Approx(ref(n + i)).scale(1.0).epsilon(1e-9));
    }
    CHECK(c.residual <= 1e-10);
    for (double tm : t) {
      CHECK(std::abs(c.value(tm) - 1.0) <= 1e-9);
      CHECK(std::abs(0.1 * c.derivative(tm)) <= 1e-9);
    }
  }
}

TEST_CASE("coincident nodes fail to construct") {
  CHECK_THROWS_AS(build_certificate_1d(make_gaussian(0.1), {0.0, 0.0}), ConstructionFailure);
}

TEST_CASE("close gaussian pair fails verification") {
  const auto c = build_certificate_1d(make_gaussian(0.1), {0.0, 0.06});
  const auto v = verify_certificate_1d(c);
  CHECK_FALSE(v.all_passed());
  MESSAGE("failing checks at 0.6 sigma:");
  for (const auto& chk : v.checks) {
    if (!chk.passed) MESSAGE("  " << chk.name << " margin " << chk.worst_margin);
  }
}

TEST_CASE("two cauchy nodes: measured pass boundary") {
  const auto g = make_cauchy(0.1);
  // The positive pair needs nu near 0.95 on the 40-per-sigma grid; at 0.5
  // the near cap is violated between the nodes.
  CHECK_FALSE(verify_certificate_1d(build_certificate_1d(g, equispaced_nodes(0.5, 0.1, 2))).all_passed());
  CHECK(verify_certificate_1d(build_certificate_1d(g, equispaced_nodes(1.0, 0.1, 2))).all_passed());
  // With alternating signs the pair passes from about 0.57.
  const auto alt = pattern_signs(SignPattern::kAlternating, 2);
  CHECK(verify_certificate_1d(build_certificate_1d(g, equispaced_nodes(0.6, 0.1, 2), alt)).all_passed());
}

TEST_CASE("verification grid contains the nodes and covers the extent") {
  const auto c = build_certificate_1d(make_cauchy(0.1), equispaced_nodes(2.0, 0.1, 3));
  const auto v = verify_certificate_1d(c);
  CHECK(v.grid_step == doctest::Approx(0.1 / 40));
  // (0.4 + 2) / 0.0025 + 1 grid points plus the three nodes.
  CHECK(v.grid_points == 961 + 3);
  CHECK(v.check("interpolation").passed);
}

TEST_CASE("minimal separation search") {
  const auto g = make_cauchy(0.1);
  SeparationOptions o;
  const auto many = minimal_separation_search(g, o);
  CHECK(many.nu_star >= 0.4);
  CHECK(many.nu_star <= 0.6);
  SeparationOptions two = o;
  two.max_count = 2;
  const auto pair = minimal_separation_search(g, two);
  CHECK(pair.nu_star <= many.nu_star);
  // Bisection is deterministic.
  const auto again = minimal_separation_search(g, o);
  REQUIRE(again.trace.size() == many.trace.size());
  for (std::size_t i = 0; i < many.trace.size(); ++i) CHECK(again.trace[i].nu == many.trace[i].nu);
  std::ostringstream os;
  write_separation_trace(os, many);
  CHECK(os.str().rfind("count,nu,passed,worst_margin\n", 0) == 0);
}

TEST_CASE("positive pattern: two nodes need no more separation than many") {
  for (const auto& g : {make_gaussian(0.1), make_cauchy(0.1)}) {
    SeparationOptions o;
    o.pattern = SignPattern::kPositive;
    o.max_count = 6;
    const auto many = minimal_separation_search(g, o);
    o.max_count = 2;
    CHECK(minimal_separation_search(g, o).nu_star <= many.nu_star);
  }
}

TEST_CASE("search range exhaustion") {
  SeparationOptions o;
  o.lo = 0.1;
  o.hi = 0.3;
  CHECK_THROWS_AS(minimal_separation_search(make_gaussian(0.1), o), RangeExhausted);
}

TEST_CASE("product certificate with one node") {
  const auto g = make_cauchy(0.1);
  auto c = build_certificate_1d(g, {0.0});
  const auto p = build_product_certificate({c}, 100, {-100, 100});
  CHECK(p.q[100] == doctest::Approx(-p.rho).epsilon(1e-12));
  CHECK(p.q[130] == doctest::Approx(1.0 - c.value(0.3) - p.rho).epsilon(1e-14));
  CHECK(p.all_passed());
}

TEST_CASE("rho floor arithmetic") {
  const auto g = make_cauchy(0.1);
  CHECK(gamma_factor(g, 100) == doctest::Approx(10.0));
  CHECK(rho_floor(g, 1, 100) == doctest::Approx(0.5 * g.beta() / 400.0).epsilon(1e-14));
  // With N sigma below 1/eps, gamma switches to 1/eps.
  CHECK(gamma_factor(g, 20) == doctest::Approx(1.0 / 0.3));
}

TEST_CASE("r = 2 product certificate sign pattern") {
  const auto g = make_cauchy(0.1);
  auto a = build_certificate_1d(g, {-0.6, -0.1, 0.4});
  auto b = build_certificate_1d(g, {-0.55, 0.2, 0.8});
  const auto p = build_product_certificate({a, b}, 100, {-100, 100});
  CHECK(p.r() == 2);
  for (const auto& chk : p.checks) {
    CAPTURE(chk.name);
    CHECK(chk.passed);
  }
  CHECK(p.rho > 0.0);
  CHECK(p.rho < 1.0);
  for (int64_t k : p.node_indices) CHECK(std::abs(p.q[p.window.offset(k)] + p.rho) <= 1e-9);
}

TEST_CASE("product certificate preconditions") {
  const auto g = make_cauchy(0.1);
  auto c = build_certificate_1d(g, {0.0});
  CHECK_THROWS_AS(build_product_certificate({c}, 1, {-3, 3}), InvalidParameter);
  auto off = build_certificate_1d(g, {0.005});
  CHECK_THROWS_AS(build_product_certificate({off}, 100, {-100, 100}), InvalidParameter);
}

TEST_CASE("theorem bound") {
  const auto g = make_cauchy(0.1);
  CHECK(theorem_bound(g, 2, 0.5, 100, 0.0).predicted == 0.0);
  CHECK(theorem_bound(g, 2, 3.0, 100, 0.0).predicted == 0.0);
  const auto bad = theorem_bound(g, 2, 0.5, 100, 75.0);
  CHECK_FALSE(bad.valid);
  CHECK(bad.denominator == doctest::Approx(3 * 0.25 - 2 * std::numbers::pi * std::numbers::pi));
  const auto far = theorem_bound(g, 1, 1e4, 100, 1.0);
  CHECK(far.valid);
  CHECK(far.constant == doctest::Approx(32.0 / g.beta()).epsilon(1e-6));
  // Monotone in delta and in r where valid.
  double prev = 0.0;
  for (double d : {1.0, 5.0, 20.0}) {
    const double v = theorem_bound(g, 2, 3.0, 100, d).predicted;
    CHECK(v > prev);
    prev = v;
  }
  prev = 0.0;
  for (int r = 1; r <= 4; ++r) {
    const double v = theorem_bound(g, r, 3.0, 100, 1.0).predicted;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("coefficient bound in its validity regime") {
  const auto g = make_cauchy(0.1);
  CHECK_FALSE(coefficient_bound(g, 0.5).has_value());
  for (double nu : {2.6, 3.0, 4.0, 6.0}) {
    const auto bound = coefficient_bound(g, nu);
    REQUIRE(bound.has_value());
    for (int n = 2; n <= 10; ++n) {
      const auto c = build_certificate_1d(g, equispaced_nodes(nu, 0.1, n));
      CHECK(c.max_abs_a() <= *bound);
    }
  }
}

TEST_CASE("2D certificates") {
  const auto g = make_gaussian_2d(0.1);
  const auto c = build_certificate_2d(g, {{0.0, 0.0}});
  CHECK(c.a[0] == doctest::Approx(1.0 / g.peak()));
  CHECK(std::abs(c.b1[0]) <= 1e-15);
  CHECK(std::abs(c.b2[0]) <= 1e-15);
  for (double t1 : {-0.3, 0.0, 0.07, 0.5}) {
    for (double t2 : {-0.2, 0.01, 0.4}) {
      const double q = c.value(t1, t2);
      CHECK(q == doctest::Approx(g.value(t1 / 0.1, t2 / 0.1)).epsilon(1e-14));
      CHECK(q >= 0.0);
      CHECK(q <= 1.0);
    }
  }
  CHECK(verify_certificate_2d(c).all_passed());

  const auto k = make_cauchy_like_2d(0.1);
  const auto pair = build_certificate_2d(k, {{0.0, 0.0}, {0.08, 0.03}});
  CHECK(pair.residual <= 1e-10);
  const auto v = verify_certificate_2d(pair);
  for (const auto& chk : v.checks) {
    CAPTURE(chk.name);
    CHECK(chk.passed);
  }
  const nlohmann::json j = pair;
  CHECK(j["b1"].size() == 2);
}
