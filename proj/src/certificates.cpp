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
#include "pulserec/certificates.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pulserec/error.hpp"

namespace pulserec {
namespace {

constexpr double kMinRcond = 1e-14;
constexpr double kMaxResidual = 1e-10;

bool same_kernel(const Kernel& x, const Kernel& y) {
  return x.family() == y.family() && x.sigma() == y.sigma() && x.epsilon() == y.epsilon() &&
         x.beta() == y.beta();
}

struct Solved {
  Eigen::VectorXd coef;
  double residual = 0.0;
  double rcond = 0.0;
};

Solved solve_system(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs, const char* what) {
  if (!m.allFinite()) throw ConstructionFailure(std::string(what) + ": non-finite system", 0.0);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Solved s;
  s.rcond = lu.rcond();
  if (!(s.rcond >= kMinRcond)) {
    throw ConstructionFailure(std::string(what) + ": interpolation system is singular", s.rcond);
  }
  s.coef = lu.solve(rhs);
  s.residual = (m * s.coef - rhs).lpNorm<Eigen::Infinity>();
  if (!s.coef.allFinite() || !(s.residual <= kMaxResidual)) {
    throw ConstructionFailure(std::string(what) + ": interpolation residual too large", s.rcond);
  }
  return s;
}

ConditionCheck make_check(std::string name, double margin, double location, bool passed) {
  return ConditionCheck{std::move(name), passed, margin, location};
}

// Tracks the smallest margin and where it occurred.
struct Worst {
  double margin = std::numeric_limits<double>::infinity();
  double location = 0.0;
  void update(double m, double t) {
    if (m < margin) {
      margin = m;
      location = t;
    }
  }
};

}  // namespace

std::string_view pattern_name(SignPattern pattern) {
  return pattern == SignPattern::kPositive ? "positive" : "alternating";
}

SignPattern parse_pattern(std::string_view name) {
  if (name == "positive") return SignPattern::kPositive;
  if (name == "alternating") return SignPattern::kAlternating;
  throw InvalidParameter("unknown sign pattern: " + std::string(name));
}

double Certificate1D::value(double t) const {
  const double s = sigma();
  double q = 0.0;
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const double u = (t - nodes[m]) / s;
    q += a[m] * kernel.derivative(0, u) + b[m] * kernel.derivative(1, u);
  }
  return q;
}

double Certificate1D::derivative(double t) const {
  const double s = sigma();
  double q = 0.0;
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const double u = (t - nodes[m]) / s;
    q += a[m] * kernel.derivative(1, u) + b[m] * kernel.derivative(2, u);
  }
  return q / s;
}

double Certificate1D::max_abs_a() const {
  double v = 0.0;
  for (double x : a) v = std::max(v, std::abs(x));
  return v;
}

double Certificate1D::max_abs_b() const {
  double v = 0.0;
  for (double x : b) v = std::max(v, std::abs(x));
  return v;
}

std::vector<double> pattern_signs(SignPattern pattern, std::size_t count) {
  std::vector<double> s(count, 1.0);
  if (pattern == SignPattern::kAlternating) {
    for (std::size_t i = 1; i < count; i += 2) s[i] = -1.0;
  }
  return s;
}

std::vector<double> equispaced_nodes(double nu, double sigma, int count) {
  if (count < 1 || !(nu > 0.0) || !(sigma > 0.0)) {
    throw InvalidParameter("equispaced_nodes: need count >= 1, nu > 0, sigma > 0");
  }
  std::vector<double> t(count);
  const double c = 0.5 * (count - 1);
  for (int i = 0; i < count; ++i) t[i] = (i - c) * nu * sigma;
  return t;
}

Certificate1D build_certificate_1d(const Kernel& kernel, std::vector<double> nodes,
                                   std::vector<double> signs) {
  const std::size_t n = nodes.size();
  if (n == 0) throw InvalidParameter("build_certificate_1d: empty node set");
  if (signs.empty()) signs.assign(n, 1.0);
  if (signs.size() != n) throw DimensionError("build_certificate_1d: signs size");
  for (double t : nodes) {
    if (!std::isfinite(t)) throw InvalidParameter("build_certificate_1d: non-finite node");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return nodes[i] < nodes[j]; });
  std::vector<double> t(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = nodes[order[i]];
    s[i] = signs[order[i]];
  }

  const double sigma = kernel.sigma();
  Eigen::MatrixXd m(2 * n, 2 * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      const double u = (t[l] - t[k]) / sigma;
      const double g0 = kernel.derivative(0, u);
      const double g1 = kernel.derivative(1, u);
      const double g2 = kernel.derivative(2, u);
      m(l, k) = g0;
      m(l, n + k) = g1;
      m(n + l, k) = g1;
      m(n + l, n + k) = g2;
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
  for (std::size_t l = 0; l < n; ++l) rhs(l) = s[l];
  const Solved sol = solve_system(m, rhs, "build_certificate_1d");

  Certificate1D cert{kernel, std::move(t), std::move(s), {}, {}, sol.residual, sol.rcond};
  cert.a.assign(sol.coef.data(), sol.coef.data() + n);
  cert.b.assign(sol.coef.data() + n, sol.coef.data() + 2 * n);
  return cert;
}

bool CertificateVerification::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

double CertificateVerification::worst_margin() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) w = std::min(w, c.worst_margin);
  return w;
}

const ConditionCheck& CertificateVerification::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidParameter("no such check: " + std::string(name));
}

CertificateVerification verify_certificate_1d(const Certificate1D& cert,
                                              const VerifyOptions& options) {
  if (options.samples_per_sigma < 1 || !(options.extent >= 0.0)) {
    throw InvalidParameter("verify_certificate_1d: bad grid options");
  }
  const Kernel& k = cert.kernel;
  const double sigma = cert.sigma();
  const double eps = k.epsilon();
  const double curv = k.beta() / (4.0 * k.peak());
  const double far_cap = 1.0 - curv * eps * eps;
  const bool positive =
      std::all_of(cert.signs.begin(), cert.signs.end(), [](double s) { return s > 0.0; });
  const auto& nodes = cert.nodes;

  CertificateVerification out;
  out.grid_step = sigma / options.samples_per_sigma;

  Worst interp;
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const double ev = std::abs(cert.value(nodes[m]) - cert.signs[m]);
    const double ed = sigma * std::abs(cert.derivative(nodes[m]));
    interp.update(options.interpolation_tol - std::max(ev, ed), nodes[m]);
  }

  const double lo = nodes.front() - options.extent * sigma;
  const double hi = nodes.back() + options.extent * sigma;
  const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / out.grid_step + 1e-9));
  std::vector<double> grid;
  grid.reserve(steps + 1 + nodes.size());
  for (std::size_t i = 0; i <= steps; ++i) grid.push_back(lo + static_cast<double>(i) * out.grid_step);
  grid.insert(grid.end(), nodes.begin(), nodes.end());
  std::sort(grid.begin(), grid.end());
  out.grid_points = grid.size();

  Worst near, far, nonneg;
  for (double t : grid) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
    double d = std::numeric_limits<double>::infinity();
    if (it != nodes.end()) d = *it - t;
    if (it != nodes.begin()) d = std::min(d, t - *std::prev(it));
    const double q = cert.value(t);
    const double v = positive ? q : std::abs(q);
    if (d <= eps * sigma) {
      near.update(1.0 - curv * d * d / (sigma * sigma) - v, t);
    } else {
      far.update(far_cap - v, t);
    }
    if (positive) nonneg.update(q, t);
  }

  auto finite_or_zero = [](double m) { return std::isfinite(m) ? m : 0.0; };
  out.checks.push_back(make_check("interpolation", interp.margin, interp.location,
                                  interp.margin >= 0.0));
  out.checks.push_back(make_check("near_cap", near.margin, near.location,
                                  near.margin >= -options.slack));
  out.checks.push_back(make_check("far_cap", finite_or_zero(far.margin), far.location,
                                  !std::isfinite(far.margin) || far.margin > 0.0));
  if (positive) {
    out.checks.push_back(make_check("nonnegative", nonneg.margin, nonneg.location,
                                    nonneg.margin >= -options.slack));
  }
  return out;
}

bool separation_passes(const Kernel& kernel, double nu, int count, SignPattern pattern,
                       const VerifyOptions& verify, double* worst_margin) {
  try {
    auto cert = build_certificate_1d(kernel, equispaced_nodes(nu, kernel.sigma(), count),
                                     pattern_signs(pattern, count));
    const auto report = verify_certificate_1d(cert, verify);
    if (worst_margin) *worst_margin = report.worst_margin();
    return report.all_passed();
  } catch (const ConstructionFailure&) {
    if (worst_margin) *worst_margin = -std::numeric_limits<double>::infinity();
    return false;
  }
}

SeparationResult minimal_separation_search(const Kernel& kernel, const SeparationOptions& o) {
  if (o.min_count < 1 || o.max_count < o.min_count || !(o.lo > 0.0) || !(o.hi > o.lo) ||
      !(o.tolerance > 0.0) || !(o.scan_step > 0.0)) {
    throw InvalidParameter("minimal_separation_search: bad options");
  }
  SeparationResult result;
  result.kernel = std::string(kernel.name());
  result.pattern = o.pattern;
  result.nu_star = 0.0;

  for (int count = o.min_count; count <= o.max_count; ++count) {
    auto probe = [&](double nu) {
      double margin = 0.0;
      const bool ok = separation_passes(kernel, nu, count, o.pattern, o.verify, &margin);
      result.trace.push_back({count, nu, ok, margin});
      return ok;
    };
    if (!probe(o.hi)) {
      throw RangeExhausted("minimal_separation_search: nu = " + std::to_string(o.hi) +
                           " fails for " + std::to_string(count) + " nodes");
    }
    double pass = o.hi;
    double fail = -1.0;
    for (int i = 1;; ++i) {
      const double nu = o.hi - i * o.scan_step;
      if (nu < o.lo - 1e-12) break;
      if (probe(nu)) {
        pass = nu;
      } else {
        fail = nu;
        break;
      }
    }
    if (fail < 0.0 && pass > o.lo && probe(o.lo)) pass = o.lo;
    if (fail < 0.0 && pass > o.lo) fail = o.lo;
    if (fail > 0.0) {
      while (pass - fail > o.tolerance) {
        const double mid = 0.5 * (pass + fail);
        if (probe(mid)) {
          pass = mid;
        } else {
          fail = mid;
        }
      }
    }
    result.counts.push_back(count);
    result.per_count.push_back(pass);
    result.nu_star = std::max(result.nu_star, pass);
  }
  return result;
}

void write_separation_trace(std::ostream& out, const SeparationResult& result) {
  out << "count,nu,passed,worst_margin\n";
  out.precision(17);
  for (const auto& p : result.trace) {
    out << p.count << ',' << p.nu << ',' << (p.passed ? 1 : 0) << ',' << p.worst_margin << '\n';
  }
}

double gamma_factor(const Kernel& kernel, int grid_n) {
  return std::max(grid_n * kernel.sigma(), 1.0 / kernel.epsilon());
}

double rho_floor(const Kernel& kernel, int r, int grid_n) {
  const double g = gamma_factor(kernel, grid_n);
  return 0.5 * std::pow(kernel.beta() / (4.0 * kernel.peak() * g * g), r);
}

bool ProductCertificate::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

ProductCertificate build_product_certificate(std::vector<Certificate1D> components, int grid_n,
                                             IndexRange window) {
  if (components.empty()) throw InvalidParameter("build_product_certificate: no components");
  if (grid_n < 1 || window.empty()) {
    throw InvalidParameter("build_product_certificate: bad grid");
  }
  const Kernel& kernel = components.front().kernel;
  for (const auto& c : components) {
    if (!same_kernel(c.kernel, kernel)) {
      throw InvalidParameter("build_product_certificate: components use different kernels");
    }
  }
  const int r = static_cast<int>(components.size());
  const double ns = grid_n * kernel.sigma();
  const double need = std::pow(0.5, 1.0 / (2.0 * r) + 1.0) * std::sqrt(kernel.beta() / kernel.peak());
  if (!(ns > need)) {
    throw InvalidParameter("build_product_certificate: N sigma = " + std::to_string(ns) +
                           " must exceed " + std::to_string(need));
  }

  ProductCertificate p;
  p.grid_n = grid_n;
  p.window = window;
  for (const auto& c : components) {
    for (double t : c.nodes) {
      const double kd = std::round(t * grid_n);
      if (std::abs(kd - t * grid_n) > 1e-9 * std::max(1.0, std::abs(kd))) {
        throw InvalidParameter("build_product_certificate: node off the grid");
      }
      const auto k = static_cast<int64_t>(kd);
      if (!window.contains(k)) throw InvalidParameter("build_product_certificate: node outside window");
      p.node_indices.push_back(k);
    }
  }
  std::sort(p.node_indices.begin(), p.node_indices.end());
  p.node_indices.erase(std::unique(p.node_indices.begin(), p.node_indices.end()),
                       p.node_indices.end());

  const std::size_t size = window.size();
  std::vector<double> prod(size, 1.0);
  for (const auto& c : components) {
    for (std::size_t i = 0; i < size; ++i) {
      const double t = static_cast<double>(window.lo + static_cast<int64_t>(i)) / grid_n;
      prod[i] *= 1.0 - c.value(t);
    }
  }
  std::vector<bool> is_node(size, false);
  for (int64_t k : p.node_indices) is_node[window.offset(k)] = true;

  double min_off = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size; ++i) {
    if (!is_node[i]) min_off = std::min(min_off, prod[i]);
  }
  if (!std::isfinite(min_off)) {
    throw InvalidParameter("build_product_certificate: window has no off-node points");
  }
  p.rho = 0.5 * min_off;
  if (p.rho >= 1.0) throw InvalidParameter("build_product_certificate: rho >= 1");
  p.gamma = gamma_factor(kernel, grid_n);
  p.rho_floor = rho_floor(kernel, r, grid_n);
  p.meets_floor = p.rho >= p.rho_floor;

  p.q.resize(size);
  for (std::size_t i = 0; i < size; ++i) p.q[i] = prod[i] - p.rho;

  constexpr double kNodeTol = 1e-9;
  constexpr double kSlack = 1e-12;
  Worst node, lower, upper;
  for (std::size_t i = 0; i < size; ++i) {
    const double t = static_cast<double>(window.lo + static_cast<int64_t>(i)) / grid_n;
    if (is_node[i]) {
      node.update(kNodeTol - std::abs(p.q[i] + p.rho), t);
    } else {
      lower.update(p.q[i] - p.rho, t);
    }
    upper.update(1.0 - p.q[i], t);
  }
  p.checks.push_back(make_check("rho_range", std::min(p.rho, 1.0 - p.rho), 0.0,
                                p.rho > 0.0 && p.rho < 1.0));
  p.checks.push_back(make_check("node_value", node.margin, node.location, node.margin >= 0.0));
  p.checks.push_back(make_check("off_node_lower", lower.margin, lower.location,
                                lower.margin >= -kSlack));
  p.checks.push_back(make_check("upper", upper.margin, upper.location, upper.margin >= -kSlack));
  p.components = std::move(components);
  return p;
}

TheoremBound theorem_bound(const Kernel& kernel, int r, double nu, int grid_n, double delta) {
  if (r < 1 || !(nu > 0.0) || grid_n < 1 || !(delta >= 0.0)) {
    throw InvalidParameter("theorem_bound: need r >= 1, nu > 0, N >= 1, delta >= 0");
  }
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double g0 = kernel.peak();
  const double c0 = kernel.decay_constant(0);
  const double nu2 = nu * nu;

  TheoremBound b;
  b.r = r;
  b.nu = nu;
  b.delta = delta;
  b.denominator = 3.0 * g0 * nu2 - 2.0 * pi2 * c0;
  b.valid = b.denominator > 0.0;
  b.constant = std::pow(4.0, r + 1) * (std::pow(2.0, r) - 1.0) *
               std::pow(g0 / kernel.beta(), r) *
               std::pow(c0 * (1.0 + pi2 / (6.0 * nu2)), r - 1) *
               std::pow(6.0 * nu2 / b.denominator, r);
  b.gamma = gamma_factor(kernel, grid_n);
  b.predicted = delta == 0.0 ? 0.0 : b.constant * std::pow(b.gamma, 2 * r) * delta;
  return b;
}

std::optional<double> coefficient_bound(const Kernel& kernel, double nu) {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double den = 3.0 * kernel.peak() * nu * nu - 2.0 * pi2 * kernel.decay_constant(0);
  if (!(den > 0.0)) return std::nullopt;
  return 3.0 * nu * nu / den;
}

double Certificate2D::value(double t1, double t2) const {
  const double s = sigma();
  double q = 0.0;
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const double u1 = (t1 - nodes[m][0]) / s;
    const double u2 = (t2 - nodes[m][1]) / s;
    const Kernel& f = kernel.factor();
    const double g0x = f.derivative(0, u1), g0y = f.derivative(0, u2);
    q += a[m] * g0x * g0y + b1[m] * f.derivative(1, u1) * g0y + b2[m] * g0x * f.derivative(1, u2);
  }
  return q;
}

std::array<double, 2> Certificate2D::gradient(double t1, double t2) const {
  const double s = sigma();
  const Kernel& f = kernel.factor();
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const double u1 = (t1 - nodes[m][0]) / s;
    const double u2 = (t2 - nodes[m][1]) / s;
    const double x0 = f.derivative(0, u1), x1 = f.derivative(1, u1), x2 = f.derivative(2, u1);
    const double y0 = f.derivative(0, u2), y1 = f.derivative(1, u2), y2 = f.derivative(2, u2);
    d1 += a[m] * x1 * y0 + b1[m] * x2 * y0 + b2[m] * x1 * y1;
    d2 += a[m] * x0 * y1 + b1[m] * x1 * y1 + b2[m] * x0 * y2;
  }
  return {d1 / s, d2 / s};
}

Certificate2D build_certificate_2d(const Kernel2D& kernel,
                                   std::vector<std::array<double, 2>> nodes) {
  const std::size_t n = nodes.size();
  if (n == 0) throw InvalidParameter("build_certificate_2d: empty node set");
  const double s = kernel.sigma();
  Eigen::MatrixXd m(3 * n, 3 * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      const double u1 = (nodes[l][0] - nodes[k][0]) / s;
      const double u2 = (nodes[l][1] - nodes[k][1]) / s;
      auto g = [&](int p1, int p2) { return kernel.partial(p1, p2, u1, u2); };
      m(l, k) = g(0, 0);
      m(l, n + k) = g(1, 0);
      m(l, 2 * n + k) = g(0, 1);
      m(n + l, k) = g(1, 0);
      m(n + l, n + k) = g(2, 0);
      m(n + l, 2 * n + k) = g(1, 1);
      m(2 * n + l, k) = g(0, 1);
      m(2 * n + l, n + k) = g(1, 1);
      m(2 * n + l, 2 * n + k) = g(0, 2);
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(3 * n);
  rhs.head(n).setOnes();
  const Solved sol = solve_system(m, rhs, "build_certificate_2d");
  Certificate2D cert{kernel, std::move(nodes), {}, {}, {}, sol.residual, sol.rcond};
  cert.a.assign(sol.coef.data(), sol.coef.data() + n);
  cert.b1.assign(sol.coef.data() + n, sol.coef.data() + 2 * n);
  cert.b2.assign(sol.coef.data() + 2 * n, sol.coef.data() + 3 * n);
  return cert;
}

CertificateVerification verify_certificate_2d(const Certificate2D& cert,
                                              const VerifyOptions2D& options) {
  if (options.samples_per_sigma < 1 || !(options.extent >= 0.0)) {
    throw InvalidParameter("verify_certificate_2d: bad grid options");
  }
  const double s = cert.sigma();
  const double eps = cert.kernel.epsilon();
  CertificateVerification out;
  out.grid_step = s / options.samples_per_sigma;

  Worst interp;
  for (const auto& t : cert.nodes) {
    const auto gr = cert.gradient(t[0], t[1]);
    const double e = std::max({std::abs(cert.value(t[0], t[1]) - 1.0), s * std::abs(gr[0]),
                               s * std::abs(gr[1])});
    interp.update(options.interpolation_tol - e, t[0]);
  }

  double lo1 = cert.nodes.front()[0], hi1 = lo1, lo2 = cert.nodes.front()[1], hi2 = lo2;
  for (const auto& t : cert.nodes) {
    lo1 = std::min(lo1, t[0]);
    hi1 = std::max(hi1, t[0]);
    lo2 = std::min(lo2, t[1]);
    hi2 = std::max(hi2, t[1]);
  }
  const double pad = options.extent * s;
  const auto n1 = static_cast<std::size_t>(std::floor((hi1 - lo1 + 2 * pad) / out.grid_step + 1e-9));
  const auto n2 = static_cast<std::size_t>(std::floor((hi2 - lo2 + 2 * pad) / out.grid_step + 1e-9));

  Worst near, far, nonneg;
  for (std::size_t i = 0; i <= n1; ++i) {
    const double t1 = lo1 - pad + static_cast<double>(i) * out.grid_step;
    for (std::size_t j = 0; j <= n2; ++j) {
      const double t2 = lo2 - pad + static_cast<double>(j) * out.grid_step;
      double dinf = std::numeric_limits<double>::infinity();
      double d2 = 0.0;
      for (const auto& t : cert.nodes) {
        const double e1 = t1 - t[0], e2 = t2 - t[1];
        const double di = std::max(std::abs(e1), std::abs(e2));
        if (di < dinf) {
          dinf = di;
          d2 = e1 * e1 + e2 * e2;
        }
      }
      const double q = cert.value(t1, t2);
      if (dinf <= eps * s) {
        if (d2 > 1e-12 * s * s) near.update((1.0 - q) * s * s / d2, t1);
      } else {
        far.update(1.0 - q, t1);
      }
      nonneg.update(q, t1);
      ++out.grid_points;
    }
  }
  auto finite_or_zero = [](double m) { return std::isfinite(m) ? m : 0.0; };
  out.checks.push_back(make_check("interpolation", interp.margin, interp.location,
                                  interp.margin >= 0.0));
  out.checks.push_back(make_check("near_cap", finite_or_zero(near.margin), near.location,
                                  !std::isfinite(near.margin) || near.margin > 0.0));
  out.checks.push_back(make_check("far_cap", finite_or_zero(far.margin), far.location,
                                  !std::isfinite(far.margin) || far.margin > 0.0));
  out.checks.push_back(make_check("nonnegative", nonneg.margin, nonneg.location,
                                  nonneg.margin >= -options.slack));
  return out;
}

void to_json(nlohmann::json& j, const Certificate1D& c) {
  j = {{"kernel", c.kernel.name()}, {"sigma", c.sigma()}, {"nodes", c.nodes},
       {"signs", c.signs},          {"a", c.a},            {"b", c.b},
       {"residual", c.residual},    {"rcond", c.rcond}};
}

void to_json(nlohmann::json& j, const Certificate2D& c) {
  j = {{"kernel", c.kernel.name()}, {"sigma", c.sigma()}, {"nodes", c.nodes},
       {"a", c.a},                  {"b1", c.b1},          {"b2", c.b2},
       {"residual", c.residual},    {"rcond", c.rcond}};
}

void to_json(nlohmann::json& j, const CertificateVerification& v) {
  j = {{"passed", v.all_passed()},
       {"grid_points", v.grid_points},
       {"grid_step", v.grid_step},
       {"checks", v.checks}};
}

void to_json(nlohmann::json& j, const SeparationResult& r) {
  j = {{"kernel", r.kernel},   {"pattern", pattern_name(r.pattern)}, {"nu_star", r.nu_star},
       {"counts", r.counts},   {"per_count", r.per_count},           {"probes", r.trace.size()}};
}

void to_json(nlohmann::json& j, const ProductCertificate& p) {
  j = {{"r", p.r()},
       {"grid_n", p.grid_n},
       {"window", {p.window.lo, p.window.hi}},
       {"nodes", p.node_indices},
       {"rho", p.rho},
       {"rho_floor", p.rho_floor},
       {"meets_floor", p.meets_floor},
       {"gamma", p.gamma},
       {"passed", p.all_passed()},
       {"checks", p.checks}};
}

void to_json(nlohmann::json& j, const TheoremBound& b) {
  j = {{"r", b.r},
       {"nu", b.nu},
       {"delta", b.delta},
       {"constant", b.constant},
       {"gamma", b.gamma},
       {"predicted", b.predicted},
       {"denominator", b.denominator},
       {"valid", b.valid}};
}

}  // namespace pulserec
