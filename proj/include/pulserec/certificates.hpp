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
// Interpolating dual certificates built from shifted copies of a kernel and
// its derivatives, the grid product certificate used for positive recovery,
// and the closed-form error constant.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pulserec/grid.hpp"
#include "pulserec/kernel.hpp"

namespace pulserec {

// Target values at the nodes: all ones, or +1, -1, +1, ... in node order.
enum class SignPattern { kPositive, kAlternating };

std::string_view pattern_name(SignPattern pattern);
SignPattern parse_pattern(std::string_view name);

// q(t) = sum_m a_m g((t - t_m)/sigma) + b_m g'((t - t_m)/sigma), with
// q(t_m) = s_m and q'(t_m) = 0.
struct Certificate1D {
  Kernel kernel;
  std::vector<double> nodes;  // t units, ascending
  std::vector<double> signs;
  std::vector<double> a;
  std::vector<double> b;
  // Max abs residual of the 2|T| interpolation system.
  double residual = 0.0;
  // Reciprocal condition estimate of the system matrix.
  double rcond = 0.0;

  double sigma() const { return kernel.sigma(); }
  double value(double t) const;
  double derivative(double t) const;
  double max_abs_a() const;
  double max_abs_b() const;
};

// Throws ConstructionFailure when the system is numerically singular.
// Empty signs means the positive pattern.
Certificate1D build_certificate_1d(const Kernel& kernel, std::vector<double> nodes,
                                   std::vector<double> signs = {});

// Nodes at spacing nu * sigma, centred on zero.
std::vector<double> equispaced_nodes(double nu, double sigma, int count);
std::vector<double> pattern_signs(SignPattern pattern, std::size_t count);

struct VerifyOptions {
  int samples_per_sigma = 40;
  // Grid extends this many sigma beyond the extreme nodes.
  double extent = 10.0;
  double interpolation_tol = 1e-9;
  // Slack for roundoff on the non-strict inequalities.
  double slack = 1e-12;
};

struct CertificateVerification {
  std::vector<ConditionCheck> checks;
  std::size_t grid_points = 0;
  double grid_step = 0.0;

  bool all_passed() const;
  double worst_margin() const;
  const ConditionCheck& check(std::string_view name) const;
};

// Checks on a dense grid that contains the nodes:
//   interpolation  |q(t_m) - s_m|, sigma |q'(t_m)| <= tol
//   near_cap       q <= 1 - beta d^2 / (4 g(0) sigma^2) where d <= eps sigma
//   far_cap        q <  1 - beta eps^2 / (4 g(0)) elsewhere
//   nonnegative    q >= 0
// d is the distance to the nearest node. For signed certificates the caps
// apply to |q| and the nonnegativity check is omitted.
CertificateVerification verify_certificate_1d(const Certificate1D& cert,
                                              const VerifyOptions& options = {});

struct SeparationOptions {
  SignPattern pattern = SignPattern::kAlternating;
  int min_count = 2;
  int max_count = 15;
  double lo = 0.1;
  double hi = 3.0;
  double tolerance = 1e-3;
  // Downward scan step used to bracket the last failure before bisecting.
  double scan_step = 0.05;
  VerifyOptions verify;
};

struct SeparationProbe {
  int count = 0;
  double nu = 0.0;
  bool passed = false;
  double worst_margin = 0.0;
};

struct SeparationResult {
  std::string kernel;
  SignPattern pattern = SignPattern::kAlternating;
  double nu_star = 0.0;
  std::vector<int> counts;
  std::vector<double> per_count;
  std::vector<SeparationProbe> trace;
};

// Passes when construction succeeds and every verification check holds.
bool separation_passes(const Kernel& kernel, double nu, int count, SignPattern pattern,
                       const VerifyOptions& verify, double* worst_margin = nullptr);

// For each node count, the smallest nu such that every probe above it
// passes, to within the tolerance. nu_star is the max over counts. Throws
// RangeExhausted when the upper end of the range fails.
SeparationResult minimal_separation_search(const Kernel& kernel,
                                           const SeparationOptions& options = {});

void write_separation_trace(std::ostream& out, const SeparationResult& result);

struct ProductCertificate {
  std::vector<Certificate1D> components;
  int grid_n = 0;
  IndexRange window;
  std::vector<int64_t> node_indices;  // union of component nodes, ascending
  std::vector<double> q;              // prod(1 - q_i[k]) - rho over the window
  double rho = 0.0;
  double rho_floor = 0.0;
  bool meets_floor = false;
  double gamma = 0.0;
  std::vector<ConditionCheck> checks;

  int r() const { return static_cast<int>(components.size()); }
  bool all_passed() const;
};

// Component nodes must lie on the grid k / N inside the window and share
// one kernel. rho is half the minimum of the product over non-node grid
// points, so q >= rho holds there by construction; it is compared against
// the floor (1/2) (beta / (4 g(0) gamma^2))^r, gamma = max(N sigma, 1/eps).
// Throws InvalidParameter when N sigma is at or below
// (1/2)^(1/(2r) + 1) sqrt(beta / g(0)), or when rho >= 1.
ProductCertificate build_product_certificate(std::vector<Certificate1D> components, int grid_n,
                                             IndexRange window);

double rho_floor(const Kernel& kernel, int r, int grid_n);
double gamma_factor(const Kernel& kernel, int grid_n);

struct TheoremBound {
  int r = 0;
  double nu = 0.0;
  double delta = 0.0;
  double constant = 0.0;
  double gamma = 0.0;
  double predicted = 0.0;
  // 3 g(0) nu^2 - 2 pi^2 C0; the constant is meaningless unless positive.
  double denominator = 0.0;
  bool valid = false;
};

// C(g, r, nu) = 4^(r+1) (2^r - 1) (g(0)/beta)^r (C0 (1 + pi^2/(6 nu^2)))^(r-1)
//               * (6 nu^2 / (3 g(0) nu^2 - 2 pi^2 C0))^r
// and the bound C gamma^(2r) delta on ||x_hat - x||_1.
TheoremBound theorem_bound(const Kernel& kernel, int r, double nu, int grid_n, double delta);

// 3 nu^2 / (3 g(0) nu^2 - 2 pi^2 C0) on ||a||_inf, empty outside its regime.
std::optional<double> coefficient_bound(const Kernel& kernel, double nu);

struct Certificate2D {
  Kernel2D kernel;
  std::vector<std::array<double, 2>> nodes;
  std::vector<double> a;
  std::vector<double> b1;
  std::vector<double> b2;
  double residual = 0.0;
  double rcond = 0.0;

  double sigma() const { return kernel.sigma(); }
  double value(double t1, double t2) const;
  std::array<double, 2> gradient(double t1, double t2) const;
};

Certificate2D build_certificate_2d(const Kernel2D& kernel,
                                   std::vector<std::array<double, 2>> nodes);

struct VerifyOptions2D {
  int samples_per_sigma = 10;
  double extent = 5.0;
  double interpolation_tol = 1e-9;
  double slack = 1e-12;
};

// interpolation, near_cap (q <= 1 - c1 |t - t_m|^2 / sigma^2 where the
// l-infinity distance is <= eps sigma, c1 measured and required positive),
// far_cap (q <= 1 - c2 elsewhere, c2 measured and required positive) and
// nonnegative. Measured c1, c2 are stored as the check margins.
CertificateVerification verify_certificate_2d(const Certificate2D& cert,
                                              const VerifyOptions2D& options = {});

void to_json(nlohmann::json& j, const Certificate1D& c);
void to_json(nlohmann::json& j, const Certificate2D& c);
void to_json(nlohmann::json& j, const CertificateVerification& v);
void to_json(nlohmann::json& j, const SeparationResult& r);
void to_json(nlohmann::json& j, const ProductCertificate& p);
void to_json(nlohmann::json& j, const TheoremBound& b);

}  // namespace pulserec
