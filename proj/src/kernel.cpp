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

#include "pulserec/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pulserec/error.hpp"

namespace pulserec {
namespace {

double gaussian_derivative(int order, double t) {
  const double e = std::exp(-0.5 * t * t);
  switch (order) {
    case 0: return e;
    case 1: return -t * e;
    case 2: return (t * t - 1.0) * e;
    case 3: return (3.0 * t - t * t * t) * e;
  }
  throw InvalidParameter("kernel derivative order must be in 0..3");
}

double cauchy_derivative(int order, double t) {
  const double u = 1.0 + t * t;
  switch (order) {
    case 0: return 1.0 / u;
    case 1: return -2.0 * t / (u * u);
    case 2: return (6.0 * t * t - 2.0) / (u * u * u);
    case 3: return 24.0 * t * (1.0 - t * t) / (u * u * u * u);
  }
  throw InvalidParameter("kernel derivative order must be in 0..3");
}

// Radius where the tail falls to kTailTolerance * g(0).
double tail_radius(KernelFamily family) {
  switch (family) {
    case KernelFamily::kGaussian:
      return std::sqrt(-2.0 * std::log(Kernel::kTailTolerance));
    case KernelFamily::kCauchy:
      return std::sqrt(1.0 / Kernel::kTailTolerance - 1.0);
  }
  return Kernel::kMaxTruncationRadius;
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(std::string(what) + " must be positive and finite");
  }
}

// Fourth-order central difference of f at t.
template <class F>
double central_difference(const F& f, double t, double h) {
  return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
}

constexpr double kDecayRoundUp = 1.01;
constexpr double kFiniteDifferenceStep = 1e-4;
constexpr double kDerivativeTolerance = 1e-6;

}  // namespace

std::string_view family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::kGaussian: return "gaussian";
    case KernelFamily::kCauchy: return "cauchy";
  }
  return "unknown";
}

KernelFamily parse_family(std::string_view name) {
  if (name == "gaussian") return KernelFamily::kGaussian;
  if (name == "cauchy") return KernelFamily::kCauchy;
  throw InvalidParameter("unknown kernel '" + std::string(name) + "'");
}

Kernel::Kernel(KernelFamily family, double sigma, double epsilon, double beta)
    : family_(family), sigma_(sigma), epsilon_(epsilon), beta_(beta) {
  require_positive(sigma, "sigma");
  require_positive(epsilon, "epsilon");
  require_positive(beta, "beta");
  for (int order = 0; order <= kMaxDerivative; ++order) {
    decay_[order] = kDecayRoundUp * measure_decay_constant(*this, order);
  }
  // g(t) (1 + t^2) == 1 for the Cauchy kernel.
  if (family == KernelFamily::kCauchy) decay_[0] = 1.0;
  truncation_radius_ = std::min(tail_radius(family), kMaxTruncationRadius);
}

double Kernel::derivative(int order, double t) const {
  switch (family_) {
    case KernelFamily::kGaussian: return gaussian_derivative(order, t);
    case KernelFamily::kCauchy: return cauchy_derivative(order, t);
  }
  return 0.0;
}

Kernel Kernel::with_local_constants(double epsilon, double beta) const {
  Kernel copy = *this;
  require_positive(epsilon, "epsilon");
  require_positive(beta, "beta");
  copy.epsilon_ = epsilon;
  copy.beta_ = beta;
  return copy;
}

Kernel make_gaussian(double sigma, double epsilon) {
  require_positive(sigma, "sigma");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidParameter("Gaussian epsilon must lie inside the concave cap (0, 1)");
  }
  const double beta = (1.0 - epsilon * epsilon) * std::exp(-0.5 * epsilon * epsilon);
  return Kernel(KernelFamily::kGaussian, sigma, epsilon, beta);
}

Kernel make_cauchy(double sigma, double epsilon) {
  require_positive(sigma, "sigma");
  if (!(epsilon > 0.0 && epsilon < 1.0 / std::sqrt(3.0))) {
    throw InvalidParameter("Cauchy epsilon must lie inside the concave cap (0, 1/sqrt(3))");
  }
  const double u = 1.0 + epsilon * epsilon;
  const double beta = (2.0 - 6.0 * epsilon * epsilon) / (u * u * u);
  return Kernel(KernelFamily::kCauchy, sigma, epsilon, beta);
}

Kernel make_kernel(std::string_view name, double sigma) {
  switch (parse_family(name)) {
    case KernelFamily::kGaussian: return make_gaussian(sigma);
    case KernelFamily::kCauchy: return make_cauchy(sigma);
  }
  throw InvalidParameter("unknown kernel");
}

double measure_decay_constant(const Kernel& kernel, int order, double extent, double step) {
  double sup = 0.0;
  const auto count = static_cast<int64_t>(std::ceil(extent / step));
  for (int64_t i = -count; i <= count; ++i) {
    const double t = static_cast<double>(i) * step;
    sup = std::max(sup, std::abs(kernel.derivative(order, t)) * (1.0 + t * t));
  }
  return sup;
}

int64_t stencil_half_width(const Kernel& kernel, int grid_n) {
  if (grid_n < 1) throw InvalidParameter("N must be >= 1");
  const double steps = kernel.truncation_radius() * kernel.sigma() * grid_n;
  return static_cast<int64_t>(std::floor(steps + 1e-9));
}

std::vector<double> sample(const Kernel& kernel, int grid_n, IndexRange window) {
  if (window.empty()) throw InvalidParameter("sample window is empty");
  const int64_t half = stencil_half_width(kernel, grid_n);
  const double scale = kernel.sigma() * grid_n;
  std::vector<double> out(window.size(), 0.0);
  for (int64_t k = window.lo; k <= window.hi; ++k) {
    if (k < -half || k > half) continue;
    out[window.offset(k)] = kernel.value(static_cast<double>(k) / scale);
  }
  return out;
}

bool AdmissibilityReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ConditionCheck& AdmissibilityReport::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidParameter("no admissibility check named '" + std::string(name) + "'");
}

AdmissibilityReport verify_admissibility(const Kernel& kernel, int samples_per_unit,
                                         double extent) {
  if (samples_per_unit < 1) throw InvalidParameter("grid density must be positive");
  if (extent < 10.0) throw InvalidParameter("admissibility extent must cover [-10, 10]");

  AdmissibilityReport report;
  report.kernel = std::string(kernel.name());
  report.sigma = kernel.sigma();
  report.epsilon = kernel.epsilon();
  report.beta = kernel.beta();

  const double eps = kernel.epsilon();
  const double g0 = kernel.peak();
  const double g_eps = kernel.value(eps);
  const double h = kFiniteDifferenceStep;
  const auto half = static_cast<int64_t>(std::ceil(extent * samples_per_unit));

  ConditionCheck nonneg{"nonnegativity", false, std::numeric_limits<double>::infinity(), 0.0};
  ConditionCheck even{"evenness", false, std::numeric_limits<double>::infinity(), 0.0};
  std::array<ConditionCheck, 4> decay;
  std::array<ConditionCheck, 4> fd;
  std::array<double, 4> fd_error{};
  std::array<double, 4> fd_scale{};
  std::array<double, 4> fd_where{};
  for (int l = 0; l < 4; ++l) {
    decay[l] = {"decay_" + std::to_string(l), false, std::numeric_limits<double>::infinity(), 0.0};
    fd[l] = {"derivative_" + std::to_string(l), false, 0.0, 0.0};
  }
  ConditionCheck peak{"peak", false, std::numeric_limits<double>::infinity(), 0.0};
  ConditionCheck cap{"concavity", false, std::numeric_limits<double>::infinity(), 0.0};

  auto visit = [&](double t) {
    const double g = kernel.value(t);
    if (g < nonneg.worst_margin) nonneg = {nonneg.name, false, g, t};
    const double asym = 1e-14 * g0 - std::abs(g - kernel.value(-t));
    if (asym < even.worst_margin) even = {even.name, false, asym, t};
    for (int l = 0; l < 4; ++l) {
      const double gl = kernel.derivative(l, t);
      const double m = 1.0 - std::abs(gl) * (1.0 + t * t) / kernel.decay_constant(l);
      if (m < decay[l].worst_margin) decay[l] = {decay[l].name, false, m, t};
      if (l > 0) {
        const double approx =
            central_difference([&](double s) { return kernel.derivative(l - 1, s); }, t, h);
        const double err = std::abs(approx - gl);
        fd_scale[l] = std::max(fd_scale[l], std::abs(gl));
        if (err > fd_error[l]) {
          fd_error[l] = err;
          fd_where[l] = t;
        }
      }
    }
    if (std::abs(t) > eps * (1.0 + 1e-12)) {
      const double m = g_eps - g;
      if (m < peak.worst_margin) peak = {peak.name, false, m, t};
    } else {
      const double m = -kernel.beta() - kernel.derivative(2, t);
      if (m < cap.worst_margin) cap = {cap.name, false, m, t};
    }
  };
  for (int64_t i = -half; i <= half; ++i) {
    visit(static_cast<double>(i) / samples_per_unit);
  }
  // The cap endpoints are where g'' is largest on [-eps, eps].
  visit(eps);
  visit(-eps);

  nonneg.passed = nonneg.worst_margin >= 0.0;
  even.passed = even.worst_margin >= 0.0;
  peak.passed = peak.worst_margin > 0.0;
  cap.passed = cap.worst_margin >= -1e-12 * kernel.beta();
  report.checks.push_back(nonneg);
  report.checks.push_back(even);
  for (int l = 0; l < 4; ++l) {
    decay[l].passed = decay[l].worst_margin >= 0.0;
    report.checks.push_back(decay[l]);
  }
  report.checks.push_back(peak);
  report.checks.push_back(cap);
  for (int l = 1; l < 4; ++l) {
    const double rel = fd_scale[l] > 0.0 ? fd_error[l] / fd_scale[l] : fd_error[l];
    fd[l].worst_margin = kDerivativeTolerance - rel;
    fd[l].location = fd_where[l];
    fd[l].passed = fd[l].worst_margin >= 0.0;
    report.checks.push_back(fd[l]);
  }
  return report;
}

void to_json(nlohmann::json& j, const ConditionCheck& c) {
  j = nlohmann::json{{"name", c.name},
                     {"passed", c.passed},
                     {"worst_margin", c.worst_margin},
                     {"location", c.location}};
}

void to_json(nlohmann::json& j, const AdmissibilityReport& r) {
  j = nlohmann::json{{"kernel", r.kernel},   {"sigma", r.sigma},
                     {"epsilon", r.epsilon}, {"beta", r.beta},
                     {"passed", r.all_passed()}, {"checks", r.checks}};
}

// ---------------------------------------------------------------------------
// Two-dimensional kernels.

namespace {

constexpr std::array<std::pair<int, int>, 10> kPartialOrders = {{
    {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3},
}};

int partial_slot(int l1, int l2) {
  for (std::size_t i = 0; i < kPartialOrders.size(); ++i) {
    if (kPartialOrders[i].first == l1 && kPartialOrders[i].second == l2) {
      return static_cast<int>(i);
    }
  }
  throw InvalidParameter("partial order must satisfy l1 + l2 <= 3");
}

constexpr double kDecayExtent2D = 50.0;
constexpr double kDecayStep2D = 0.1;

}  // namespace

Kernel2D::Kernel2D(Kernel factor) : factor_(std::move(factor)) {
  beta_ = factor_.beta() * factor_.value(factor_.epsilon());
  for (const auto& [l1, l2] : kPartialOrders) {
    decay_[partial_slot(l1, l2)] =
        kDecayRoundUp * measure_decay_constant_2d(*this, l1, l2, kDecayExtent2D, kDecayStep2D);
  }
}

double Kernel2D::decay_constant(int l1, int l2) const { return decay_[partial_slot(l1, l2)]; }

Kernel2D make_gaussian_2d(double sigma) { return Kernel2D(make_gaussian(sigma)); }
Kernel2D make_cauchy_like_2d(double sigma) { return Kernel2D(make_cauchy(sigma)); }

Kernel2D make_kernel_2d(std::string_view name, double sigma) {
  return Kernel2D(make_kernel(name, sigma));
}

double measure_decay_constant_2d(const Kernel2D& kernel, int l1, int l2, double extent,
                                 double step) {
  const auto count = static_cast<int64_t>(std::ceil(extent / step));
  std::vector<double> d1(2 * count + 1);
  std::vector<double> d2(2 * count + 1);
  for (int64_t i = -count; i <= count; ++i) {
    const double t = static_cast<double>(i) * step;
    d1[i + count] = std::abs(kernel.factor().derivative(l1, t));
    d2[i + count] = std::abs(kernel.factor().derivative(l2, t));
  }
  double sup = 0.0;
  for (int64_t i = -count; i <= count; ++i) {
    const double t1 = static_cast<double>(i) * step;
    for (int64_t j = -count; j <= count; ++j) {
      const double t2 = static_cast<double>(j) * step;
      const double w = std::pow(1.0 + t1 * t1 + t2 * t2, 1.5);
      sup = std::max(sup, d1[i + count] * d2[j + count] * w);
    }
  }
  return sup;
}

std::vector<double> sample_2d(const Kernel2D& kernel, int grid_n, Rect window) {
  const auto rows = sample(kernel.factor(), grid_n, window.rows);
  const auto cols = sample(kernel.factor(), grid_n, window.cols);
  std::vector<double> out(window.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out[i * cols.size() + j] = rows[i] * cols[j];
  }
  return out;
}

AdmissibilityReport verify_admissibility_2d(const Kernel2D& kernel, int samples_per_unit,
                                            double extent) {
  if (samples_per_unit < 1) throw InvalidParameter("grid density must be positive");
  if (extent < 10.0) throw InvalidParameter("admissibility extent must cover [-10, 10]^2");

  AdmissibilityReport report;
  report.kernel = std::string(kernel.name()) + "_2d";
  report.sigma = kernel.sigma();
  report.epsilon = kernel.epsilon();
  report.beta = kernel.beta();

  const double eps = kernel.epsilon();
  const double axis_peak = kernel.value(eps, 0.0);
  const auto half = static_cast<int64_t>(std::ceil(extent * samples_per_unit));
  const double inf = std::numeric_limits<double>::infinity();

  ConditionCheck nonneg{"nonnegativity", false, inf, 0.0};
  ConditionCheck sym{"quadrant_symmetry", false, inf, 0.0};
  ConditionCheck peak{"peak", false, inf, 0.0};
  ConditionCheck cap{"concavity", false, inf, 0.0};
  for (int64_t i = -half; i <= half; ++i) {
    const double t1 = static_cast<double>(i) / samples_per_unit;
    for (int64_t j = -half; j <= half; ++j) {
      const double t2 = static_cast<double>(j) / samples_per_unit;
      const double g = kernel.value(t1, t2);
      if (g < nonneg.worst_margin) nonneg = {nonneg.name, false, g, t1};
      const double asym =
          1e-14 * kernel.peak() -
          std::max({std::abs(g - kernel.value(-t1, t2)), std::abs(g - kernel.value(t1, -t2)),
                    std::abs(g - kernel.value(-t1, -t2))});
      if (asym < sym.worst_margin) sym = {sym.name, false, asym, t1};
      if (std::abs(t1) > eps * (1 + 1e-12) || std::abs(t2) > eps * (1 + 1e-12)) {
        // By symmetry of the two axis conditions, compare against g2(eps, 0).
        const double m = axis_peak - g;
        if (m < peak.worst_margin) peak = {peak.name, false, m, t1};
      } else {
        const double m = -kernel.beta() - std::max(kernel.partial(2, 0, t1, t2),
                                                   kernel.partial(0, 2, t1, t2));
        if (m < cap.worst_margin) cap = {cap.name, false, m, t1};
      }
    }
  }
  for (double s1 : {-eps, eps}) {
    for (double s2 : {-eps, eps}) {
      const double m =
          -kernel.beta() - std::max(kernel.partial(2, 0, s1, s2), kernel.partial(0, 2, s1, s2));
      if (m < cap.worst_margin) cap = {cap.name, false, m, s1};
    }
  }
  nonneg.passed = nonneg.worst_margin >= 0.0;
  sym.passed = sym.worst_margin >= 0.0;
  peak.passed = peak.worst_margin > 0.0;
  cap.passed = cap.worst_margin >= -1e-12 * kernel.beta();
  report.checks = {nonneg, sym, peak, cap};

  // Bound on the test box. Separable products with algebraic tails grow
  // past any fixed constant along the axes, so this is box-local.
  for (const auto& [l1, l2] : kPartialOrders) {
    ConditionCheck c;
    c.name = "decay_" + std::to_string(l1) + std::to_string(l2);
    const double sup = measure_decay_constant_2d(kernel, l1, l2, extent, 1.0 / samples_per_unit);
    c.worst_margin = 1.0 - sup / kernel.decay_constant(l1, l2);
    c.location = extent;
    c.passed = c.worst_margin >= 0.0;
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace pulserec
