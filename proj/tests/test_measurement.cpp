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
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pulserec/error.hpp"
#include "pulserec/measurement.hpp"

using namespace pulserec;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l1(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += std::abs(x);
  return s;
}

}  // namespace

TEST_CASE("single spike gives the centred pulse") {
  const auto g = make_cauchy(0.1);
  SpikeTrain x(100, {-100, 100}, {7}, {1.0});
  const auto y = convolve(x, g);
  const int64_t h = stencil_half_width(g, 100);
  const IndexRange out{-100 - h, 100 + h};
  REQUIRE(y.size() == out.size());
  for (int64_t k = out.lo; k <= out.hi; ++k) {
    const int64_t s = k - 7;
    const double expect = std::abs(s) <= h ? 1.0 / (1.0 + std::pow(s / 10.0, 2)) : 0.0;
    CHECK(y[out.offset(k)] == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("superposition of two spikes") {
  const auto g = make_gaussian(0.1);
  SpikeTrain a(100, {-50, 50}, {-20}, {2.0});
  SpikeTrain b(100, {-50, 50}, {13}, {-0.5});
  SpikeTrain ab(100, {-50, 50}, {-20, 13}, {2.0, -0.5});
  const auto ya = convolve(a, g), yb = convolve(b, g), yab = convolve(ab, g);
  for (std::size_t i = 0; i < yab.size(); ++i) CHECK(yab[i] == doctest::Approx(ya[i] + yb[i]));
}

TEST_CASE("direct convolution matches the dense matrix oracle") {
  std::mt19937_64 rng(3);
  for (const auto& g : {make_gaussian(0.1), make_cauchy(0.1)}) {
    const IndexRange in{-40, 40};
    ConvolutionOperator op(g, 100, in);
    const long h = op.half_width();
    const auto dense = oracle::convolution_matrix([&](double t) { return g.value(t); }, 0.1, 100,
                                                  in.lo, in.hi, in.lo - h, in.hi + h, h);
    std::vector<double> x(in.size(), 0.0);
    std::uniform_int_distribution<int> pos(0, static_cast<int>(in.size()) - 1);
    for (int i = 0; i < 6; ++i) x[pos(rng)] = std::normal_distribution<double>()(rng);
    std::vector<double> y(op.rows());
    op.apply(x, y);
    const Eigen::VectorXd ref = dense * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y[i] - ref(i)) <= 1e-12);
    ConvolutionOperator mat(g, 100, in, ConvolutionMode::kMatrix);
    std::vector<double> ym(mat.rows());
    mat.apply(x, ym);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(ym[i] - ref(i)) <= 1e-12);
  }
}

TEST_CASE("adjoint consistency on random probes") {
  std::mt19937_64 rng(5);
  ConvolutionOperator a(make_cauchy(0.1), 100, {-100, 100});
  ConvolutionOperator2D b(make_cauchy_like_2d(0.1), 32, {{-16, 15}, {-16, 15}});
  ConvolutionOperator2D c(make_gaussian_2d(0.1), 32, {{-8, 9}, {-10, 7}},
                          ConvolutionMode::kDirect);
  for (const LinearOperator* op : {static_cast<const LinearOperator*>(&a),
                                   static_cast<const LinearOperator*>(&b),
                                   static_cast<const LinearOperator*>(&c)}) {
    for (int probe = 0; probe < 100; ++probe) {
      const auto x = random_vector(op->cols(), rng);
      const auto z = random_vector(op->rows(), rng);
      std::vector<double> ax(op->rows()), atz(op->cols());
      op->apply(x, ax);
      op->apply_transpose(z, atz);
      const double lhs = dot(ax, z), rhs = dot(x, atz);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("nonnegative input gives nonnegative output, and shifts commute") {
  const auto g = make_cauchy(0.1);
  SpikeTrain x(100, {-60, 60}, {-30, 0, 22}, {1.0, 3.0, 0.2});
  for (double v : convolve(x, g)) CHECK(v >= 0.0);
  SpikeTrain xs(100, {-60, 60}, {-29, 1, 23}, {1.0, 3.0, 0.2});
  const auto y = convolve(x, g), ys = convolve(xs, g);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) CHECK(ys[i + 1] == doctest::Approx(y[i]));
}

TEST_CASE("2D convolution") {
  const auto g = make_cauchy_like_2d(0.1);
  const Rect in{{-16, 15}, {-16, 15}};
  SpikeTrain2D x(32, in, {{3, -5}}, {1.0});
  const auto y = convolve_2d(x, g);
  ConvolutionOperator2D op(g, 32, in);
  const Rect out = op.output_window();
  REQUIRE(y.size() == out.size());
  const auto& s = op.stencil_1d();
  const int64_t h = op.half_width();
  for (int64_t k1 = out.rows.lo; k1 <= out.rows.hi; ++k1) {
    for (int64_t k2 = out.cols.lo; k2 <= out.cols.hi; ++k2) {
      const int64_t d1 = k1 - 3, d2 = k2 + 5;
      const double expect =
          (std::abs(d1) <= h && std::abs(d2) <= h) ? s[d1 + h] * s[d2 + h] : 0.0;
      CHECK(y[out.offset(k1, k2)] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("2D modes agree with a dense oracle built from the pulse") {
  std::mt19937_64 rng(9);
  const auto g = make_gaussian_2d(0.1);
  const Rect in{{-6, 5}, {-4, 7}};
  ConvolutionOperator2D sep(g, 32, in, ConvolutionMode::kSeparable);
  ConvolutionOperator2D dir(g, 32, in, ConvolutionMode::kDirect);
  ConvolutionOperator2D mat(g, 32, in, ConvolutionMode::kMatrix);
  const Rect out = sep.output_window();
  const int64_t h = sep.half_width();
  std::vector<double> x(in.size(), 0.0);
  std::uniform_int_distribution<int> pos(0, static_cast<int>(in.size()) - 1);
  for (int i = 0; i < 8; ++i) x[pos(rng)] = std::normal_distribution<double>()(rng);
  std::vector<double> ref(out.size(), 0.0);
  const double scale = 0.1 * 32;
  for (int64_t a1 = out.rows.lo; a1 <= out.rows.hi; ++a1) {
    for (int64_t a2 = out.cols.lo; a2 <= out.cols.hi; ++a2) {
      double acc = 0.0;
      for (int64_t b1 = in.rows.lo; b1 <= in.rows.hi; ++b1) {
        for (int64_t b2 = in.cols.lo; b2 <= in.cols.hi; ++b2) {
          if (std::abs(a1 - b1) > h || std::abs(a2 - b2) > h) continue;
          acc += std::exp(-0.5 * (std::pow((a1 - b1) / scale, 2) + std::pow((a2 - b2) / scale, 2))) *
                 x[in.offset(b1, b2)];
        }
      }
      ref[out.offset(a1, a2)] = acc;
    }
  }
  for (const ConvolutionOperator2D* op : {&sep, &dir, &mat}) {
    std::vector<double> y(op->rows());
    op->apply(x, y);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y[i] - ref[i]) <= 1e-12);
  }
}

TEST_CASE("noise budget") {
  std::vector<double> clean(301);
  for (std::size_t i = 0; i < clean.size(); ++i) clean[i] = std::sin(0.1 * i) + 1.5;
  const auto m0 = add_noise(clean, 0.0, NoiseFamily::kGaussian, 1);
  CHECK(m0.y == clean);
  for (auto fam : {NoiseFamily::kGaussian, NoiseFamily::kUniform}) {
    for (double delta : {0.5, 75.0, 400.0}) {
      const auto m = add_noise(clean, delta, fam, 17);
      std::vector<double> diff(clean.size());
      for (std::size_t i = 0; i < clean.size(); ++i) diff[i] = m.y[i] - clean[i];
      CHECK(std::abs(l1(diff) - delta) <= 1e-12 * delta);
      CHECK(l1(m.noise) <= delta * (1 + 1e-12));
      double c2 = 0.0, n2 = 0.0;
      for (std::size_t i = 0; i < clean.size(); ++i) {
        c2 += clean[i] * clean[i];
        n2 += m.noise[i] * m.noise[i];
      }
      CHECK(m.snr_db == doctest::Approx(20.0 * std::log10(std::sqrt(c2) / std::sqrt(n2))));
    }
  }
  CHECK_THROWS_AS(add_noise(clean, -1.0, NoiseFamily::kGaussian, 1), InvalidParameter);
  CHECK(add_noise(clean, 3.0, NoiseFamily::kUniform, 8).y ==
        add_noise(clean, 3.0, NoiseFamily::kUniform, 8).y);
}

TEST_CASE("measurement window covers the dilated signal window") {
  const auto g = make_cauchy(0.1);
  SpikeTrain x(100, {-100, 100}, {-50, 10}, {4.0, 7.0});
  const auto m = measure(x, g, 75.0, NoiseFamily::kGaussian, 2);
  CHECK(m.window == IndexRange{-150, 150});
  CHECK(m.y.size() == 301);
  CHECK(m.delta == 75.0);
  MESSAGE("snr at delta = 75: " << m.snr_db << " dB");
}
