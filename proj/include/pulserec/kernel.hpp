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

// Continuous pulse shapes g(t), their derivatives, grid sampling, and
// numerical checks of the non-negative admissibility conditions.
//
// A kernel is evaluated in dimensionless units: the pulse observed on the
// grid is g[k] = g(k / (sigma * N)). Two families ship: the Gaussian
// exp(-t^2/2) and the Cauchy 1/(1+t^2). Both are even, non-negative, and
// strictly concave on a cap [-eps, eps] where g'' <= -beta.

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pulserec/grid.hpp"

namespace pulserec {

enum class KernelFamily { kGaussian, kCauchy };

std::string_view family_name(KernelFamily family);
KernelFamily parse_family(std::string_view name);

class Kernel {
 public:
  static constexpr int kMaxDerivative = 3;
  // Samples are zeroed where g(t) <= kTailTolerance * g(0), or beyond
  // kMaxTruncationRadius, whichever is closer.
  static constexpr double kTailTolerance = 1e-8;
  static constexpr double kMaxTruncationRadius = 5.0;

  Kernel(KernelFamily family, double sigma, double epsilon, double beta);

  KernelFamily family() const { return family_; }
  std::string_view name() const { return family_name(family_); }
  double sigma() const { return sigma_; }
  double epsilon() const { return epsilon_; }
  double beta() const { return beta_; }
  // C_l with |g^(l)(t)| <= C_l / (1 + t^2).
  double decay_constant(int order) const { return decay_.at(order); }
  // Dimensionless radius beyond which grid samples are zero.
  double truncation_radius() const { return truncation_radius_; }

  double value(double t) const { return derivative(0, t); }
  double operator()(double t) const { return derivative(0, t); }
  double derivative(int order, double t) const;
  double peak() const { return value(0.0); }

  // Same shape with replaced local constants (eps, beta); decay constants kept.
  Kernel with_local_constants(double epsilon, double beta) const;

 private:
  KernelFamily family_;
  double sigma_;
  double epsilon_;
  double beta_;
  std::array<double, kMaxDerivative + 1> decay_{};
  double truncation_radius_ = 0.0;
};

// Gaussian exp(-t^2/2). eps defaults to 0.5; beta = (1 - eps^2) exp(-eps^2/2).
Kernel make_gaussian(double sigma, double epsilon = 0.5);
// Cauchy 1/(1+t^2). eps defaults to 0.3; beta = (2 - 6 eps^2) / (1 + eps^2)^3.
Kernel make_cauchy(double sigma, double epsilon = 0.3);
Kernel make_kernel(std::string_view name, double sigma);

// sup over a dense grid on [-extent, extent] of |g^(l)(t)| * (1 + t^2).
double measure_decay_constant(const Kernel& kernel, int order, double extent = 50.0,
                              double step = 1e-3);

// Number of grid steps covered by the truncated pulse on one side.
int64_t stencil_half_width(const Kernel& kernel, int grid_n);

// g(k / (sigma N)) for k in the window, zero beyond the truncation radius.
std::vector<double> sample(const Kernel& kernel, int grid_n, IndexRange window);

struct ConditionCheck {
  std::string name;
  bool passed = false;
  // Positive means satisfied with room to spare.
  double worst_margin = 0.0;
  double location = 0.0;
};

struct AdmissibilityReport {
  std::string kernel;
  double sigma = 0.0;
  double epsilon = 0.0;
  double beta = 0.0;
  std::vector<ConditionCheck> checks;

  bool all_passed() const;
  const ConditionCheck& check(std::string_view name) const;
};

// Checks non-negativity, evenness, decay for l = 0..3, the peak condition
// g(t) < g(eps) for |t| > eps, the cap g'' <= -beta on |t| <= eps, and
// cross-checks each analytic derivative against a 4th-order central
// difference with step 1e-4. Failures are reported, never thrown.
AdmissibilityReport verify_admissibility(const Kernel& kernel, int samples_per_unit = 200,
                                         double extent = 50.0);

void to_json(nlohmann::json& j, const ConditionCheck& c);
void to_json(nlohmann::json& j, const AdmissibilityReport& r);

// Separable two-dimensional kernel g2(t1, t2) = g(t1) g(t2).
class Kernel2D {
 public:
  explicit Kernel2D(Kernel factor);

  const Kernel& factor() const { return factor_; }
  std::string_view name() const { return factor_.name(); }
  double sigma() const { return factor_.sigma(); }
  double epsilon() const { return factor_.epsilon(); }
  // g2^(2,0), g2^(0,2) <= -beta on the square |t1|, |t2| <= eps.
  double beta() const { return beta_; }
  // C_{l1,l2} with |g2^(l1,l2)| <= C / (1 + t1^2 + t2^2)^{3/2}, measured on a
  // bounded box; see verify_admissibility_2d for the growth test.
  double decay_constant(int l1, int l2) const;
  double truncation_radius() const { return factor_.truncation_radius(); }

  double value(double t1, double t2) const { return partial(0, 0, t1, t2); }
  double operator()(double t1, double t2) const { return partial(0, 0, t1, t2); }
  double partial(int l1, int l2, double t1, double t2) const {
    return factor_.derivative(l1, t1) * factor_.derivative(l2, t2);
  }
  double peak() const { return value(0.0, 0.0); }

 private:
  Kernel factor_;
  double beta_;
  std::array<double, 10> decay_{};
};

Kernel2D make_gaussian_2d(double sigma);
Kernel2D make_cauchy_like_2d(double sigma);
Kernel2D make_kernel_2d(std::string_view name, double sigma);

double measure_decay_constant_2d(const Kernel2D& kernel, int l1, int l2, double extent,
                                 double step);

// Row-major samples over the rectangle, zero beyond the truncation radius
// on either axis.
std::vector<double> sample_2d(const Kernel2D& kernel, int grid_n, Rect window);

// Quadrant symmetry, decay for l1 + l2 <= 3 on the test box, the axis peak
// conditions, and the cap on both pure second partials.
AdmissibilityReport verify_admissibility_2d(const Kernel2D& kernel, int samples_per_unit = 10,
                                            double extent = 20.0);

}  // namespace pulserec
