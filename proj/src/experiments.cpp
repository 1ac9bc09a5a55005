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
#include "pulserec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <set>
#include <thread>

#include "pulserec/error.hpp"
#include "pulserec/regularity.hpp"
#include "pulserec/rng.hpp"

namespace pulserec {
namespace {

enum SeedLabel : uint64_t { kSupport = 1, kAmplitude = 2, kNoise = 3 };

uint64_t instance_seed(const ExperimentConfig& c, SeedLabel label, int r, int trial) {
  return derive_seed(c.seed, {label, static_cast<uint64_t>(r), static_cast<uint64_t>(trial)});
}

// One noise direction per instance, rescaled to each delta.
uint64_t noise_seed(const ExperimentConfig& c, int r, int trial) {
  return derive_seed(c.seed, {kNoise, static_cast<uint64_t>(r), static_cast<uint64_t>(trial)});
}

RecoveryOptions recovery_options(const ExperimentConfig& c) {
  RecoveryOptions o;
  o.threshold = c.threshold;
  if (c.max_iter > 0) {
    o.simplex.max_iter = c.max_iter;
    o.splitting.max_iter = c.max_iter;
  }
  if (c.splitting_tol > 0.0) {
    o.splitting.feas_tol = c.splitting_tol;
    o.splitting.gap_tol = c.splitting_tol;
  }
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Largest d with every r+1 consecutive points spanning at least d.
double effective_nu(const std::vector<double>& t, int r, double sigma, double diameter) {
  double d = diameter;
  for (std::size_t i = 0; i + r < t.size(); ++i) d = std::min(d, t[i + r] - t[i]);
  return d / sigma;
}

void fill_from_report(TrialRow& row, const RecoveryReport& rep, double hit_radius) {
  row.status = std::string(status_name(rep.solver.status));
  row.ok = rep.solver.optimal();
  row.objective = rep.objective;
  row.h_l1 = rep.h_l1;
  row.truth_l1 = rep.truth_l1;
  row.loc_mean = rep.localization.mean;
  row.loc_hausdorff = rep.localization.hausdorff;
  row.true_count = rep.localization.true_count;
  row.recovered_count = rep.localization.recovered_count;
  row.iterations = rep.solver.iterations;
  row.hits = 0;
  for (double d : rep.localization.nearest) {
    if (d <= hit_radius * (1.0 + 1e-9)) ++row.hits;
  }
}

struct Instance1D {
  SpikeTrain truth;
  Measurement measurement;
};

Instance1D make_instance_1d(const ExperimentConfig& c, const Kernel& kernel, int r, int trial,
                            std::size_t delta_index, bool positive) {
  const auto params = RegularityParams::from_separation(c.nu, c.sigma, r);
  const auto support = generate_regular_support(params, static_cast<std::size_t>(c.spikes),
                                                c.window, c.grid_n,
                                                instance_seed(c, kSupport, r, trial));
  auto amps = draw_amplitudes(support.indices.size(), c.amplitude_sd, positive,
                              instance_seed(c, kAmplitude, r, trial));
  SpikeTrain x(c.grid_n, c.window, support.indices, std::move(amps));
  auto m = measure(x, kernel, c.deltas.at(delta_index), c.noise,
                   noise_seed(c, r, trial));
  return {std::move(x), std::move(m)};
}

struct Instance2D {
  SpikeTrain2D truth;
  Measurement2D measurement;
};

Instance2D make_instance_2d(const ExperimentConfig& c, const Kernel2D& kernel, int r, int trial,
                            std::size_t delta_index, bool positive) {
  const Rect rect{c.window, c.window};
  const auto params = RegularityParams::from_separation(c.nu, c.sigma, r);
  const auto support = generate_regular_support_2d(params, static_cast<std::size_t>(c.spikes),
                                                   rect, c.grid_n,
                                                   instance_seed(c, kSupport, r, trial));
  auto amps = draw_amplitudes(support.points.size(), c.amplitude_sd, positive,
                              instance_seed(c, kAmplitude, r, trial));
  SpikeTrain2D x(c.grid_n, rect, support.points, std::move(amps));
  auto m = measure_2d(x, kernel, c.deltas.at(delta_index), c.noise,
                      noise_seed(c, r, trial));
  return {std::move(x), std::move(m)};
}

struct Task {
  int trial;
  std::size_t delta_index;
  int r;
  bool positive;
};

TrialRow base_row(const ExperimentConfig& c, const Task& t) {
  TrialRow row;
  row.trial = t.trial;
  row.seed = instance_seed(c, kSupport, t.r, t.trial);
  row.delta = c.deltas.at(t.delta_index);
  row.r = t.r;
  row.positive = t.positive;
  return row;
}

using Dump1D = std::function<void(const Task&, const Instance1D&, const RecoveryReport&)>;
using Dump2D = std::function<void(const Task&, const Instance2D&, const RecoveryReport&)>;

TrialRow run_task_1d(const ExperimentConfig& c, const Task& t, const Dump1D& dump) {
  TrialRow row = base_row(c, t);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Kernel kernel = make_kernel(c.kernel, c.sigma);
    const auto inst = make_instance_1d(c, kernel, t.r, t.trial, t.delta_index, t.positive);
    row.snr_db = inst.measurement.snr_db;
    const double diameter = static_cast<double>(c.window.size()) / c.grid_n;
    row.nu_effective = effective_nu(inst.truth.locations(), t.r, c.sigma, diameter);
    RecoveryProblem problem{inst.measurement, kernel, c.window, t.positive, c.backend};
    const auto rep = recover(problem, &inst.truth, recovery_options(c));
    fill_from_report(row, rep, c.hit_radius / c.grid_n);
    if (dump) dump(t, inst, rep);
  } catch (const Error& e) {
    row.status = "error";
    row.ok = false;
  }
  row.runtime_s = seconds_since(t0);
  return row;
}

TrialRow run_task_2d(const ExperimentConfig& c, const Task& t, const Dump2D& dump) {
  TrialRow row = base_row(c, t);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Kernel2D kernel = make_kernel_2d(c.kernel, c.sigma);
    const auto inst = make_instance_2d(c, kernel, t.r, t.trial, t.delta_index, t.positive);
    row.snr_db = inst.measurement.snr_db;
    RecoveryProblem2D problem{inst.measurement, kernel, Rect{c.window, c.window}, t.positive,
                              c.backend};
    const auto rep = recover_2d(problem, &inst.truth, recovery_options(c));
    fill_from_report(row, rep, c.hit_radius / c.grid_n);
    if (dump) dump(t, inst, rep);
  } catch (const Error& e) {
    row.status = "error";
    row.ok = false;
  }
  row.runtime_s = seconds_since(t0);
  return row;
}

// Rows land in task order whatever the completion order.
std::vector<TrialRow> run_tasks(const ExperimentConfig& c, const std::vector<Task>& tasks,
                                const std::function<TrialRow(const Task&)>& fn) {
  std::vector<TrialRow> rows(tasks.size());
  unsigned workers = c.threads > 0 ? static_cast<unsigned>(c.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) rows[i] = fn(tasks[i]);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) rows[i] = fn(tasks[i]);
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

std::filesystem::path prefixed(const std::filesystem::path& dir, int trial, const char* name) {
  return dir / ("trial" + std::to_string(trial) + "_" + name);
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw InvalidParameter("cannot write " + p.string());
  return f;
}

template <typename T>
std::vector<T> scalar_or_list(const nlohmann::json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

ExperimentConfig ExperimentConfig::demo_1d() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::demo_2d() {
  ExperimentConfig c;
  c.dimension = 2;
  c.grid_n = 32;
  c.window = {-32, 31};
  c.r_values = {2};
  c.nu = 0.8;
  c.deltas = {400.0};
  c.spikes = 6;
  c.backend = Backend::kSplitting;
  c.hit_radius = 1.0;
  c.max_iter = 40000;
  return c;
}

ExperimentConfig ExperimentConfig::sweep() {
  ExperimentConfig c;
  c.r_values = {2, 3, 4};
  c.deltas = {0, 25, 50, 75, 100, 150, 200};
  c.trials = 50;
  c.positivity = {true, false};
  c.general_r_values = {2};
  return c;
}

ExperimentConfig ExperimentConfig::certify() { return ExperimentConfig{}; }

bool ExperimentConfig::runs_general(int r) const {
  return general_r_values.empty() ||
         std::find(general_r_values.begin(), general_r_values.end(), r) != general_r_values.end();
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw InvalidParameter("config: " + what); };
  if (!(sigma > 0.0)) fail("sigma must be positive");
  if (dimension != 1 && dimension != 2) fail("dimension must be 1 or 2");
  if (grid_n < 1) fail("grid_n must be >= 1");
  if (window.empty()) fail("window is empty");
  if (r_values.empty()) fail("r list is empty");
  for (int r : r_values) {
    if (r < 1) fail("r must be >= 1");
  }
  if (!(nu > 0.0)) fail("nu must be positive");
  if (deltas.empty()) fail("delta list is empty");
  for (double d : deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) fail("delta values must be finite and >= 0");
  }
  if (trials < 1) fail("trials must be >= 1");
  if (!(amplitude_sd > 0.0)) fail("amplitude_sd must be positive");
  if (spikes < 1) fail("spikes must be >= 1");
  if (positivity.empty()) fail("positivity list is empty");
  if (!(threshold > 0.0 && threshold < 1.0)) fail("threshold must be in (0, 1)");
  if (!(hit_radius >= 0.0)) fail("hit_radius must be >= 0");
  if (max_iter < 0) fail("max_iter must be >= 0");
  if (!(splitting_tol >= 0.0)) fail("splitting_tol must be >= 0");
  if (kernels.empty()) fail("kernel list is empty");
  if (!(nu_lo > 0.0 && nu_hi > nu_lo)) fail("nu range must satisfy 0 < lo < hi");
  if (!(nu_tolerance > 0.0)) fail("nu_tolerance must be positive");
  if (min_count < 1 || max_count < min_count) fail("bad node count range");
  make_kernel(kernel, sigma);
}

void merge_config(const nlohmann::json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw InvalidParameter("config: expected a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "kernel") c.kernel = v.get<std::string>();
      else if (key == "sigma") c.sigma = v.get<double>();
      else if (key == "dimension") c.dimension = v.get<int>();
      else if (key == "grid_n") c.grid_n = v.get<int>();
      else if (key == "window") {
        const auto w = v.get<std::vector<int64_t>>();
        if (w.size() != 2) throw InvalidParameter("config: window needs [lo, hi]");
        c.window = {w[0], w[1]};
      } else if (key == "r") c.r_values = scalar_or_list<int>(v);
      else if (key == "nu") c.nu = v.get<double>();
      else if (key == "delta") c.deltas = scalar_or_list<double>(v);
      else if (key == "trials") c.trials = v.get<int>();
      else if (key == "amplitude_sd") c.amplitude_sd = v.get<double>();
      else if (key == "spikes") c.spikes = v.get<int>();
      else if (key == "seed") c.seed = v.get<uint64_t>();
      else if (key == "backend") c.backend = parse_backend(v.get<std::string>());
      else if (key == "positivity") c.positivity = scalar_or_list<bool>(v);
      else if (key == "general_r") c.general_r_values = scalar_or_list<int>(v);
      else if (key == "noise") c.noise = parse_noise(v.get<std::string>());
      else if (key == "threshold") c.threshold = v.get<double>();
      else if (key == "hit_radius") c.hit_radius = v.get<double>();
      else if (key == "max_iter") c.max_iter = v.get<long>();
      else if (key == "splitting_tol") c.splitting_tol = v.get<double>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "kernels") c.kernels = scalar_or_list<std::string>(v);
      else if (key == "pattern") c.pattern = parse_pattern(v.get<std::string>());
      else if (key == "nu_range") {
        const auto w = v.get<std::vector<double>>();
        if (w.size() != 2) throw InvalidParameter("config: nu_range needs [lo, hi]");
        c.nu_lo = w[0];
        c.nu_hi = w[1];
      } else if (key == "nu_tolerance") c.nu_tolerance = v.get<double>();
      else if (key == "counts") {
        const auto w = v.get<std::vector<int>>();
        if (w.size() != 2) throw InvalidParameter("config: counts needs [min, max]");
        c.min_count = w[0];
        c.max_count = w[1];
      } else throw InvalidParameter("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream f(path);
  if (!f) throw InvalidParameter("cannot read config " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter("config " + path.string() + ": " + e.what());
  }
  merge_config(j, base);
  return base;
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = {{"kernel", c.kernel},
       {"sigma", c.sigma},
       {"dimension", c.dimension},
       {"grid_n", c.grid_n},
       {"window", {c.window.lo, c.window.hi}},
       {"r", c.r_values},
       {"nu", c.nu},
       {"delta", c.deltas},
       {"trials", c.trials},
       {"amplitude_sd", c.amplitude_sd},
       {"spikes", c.spikes},
       {"seed", c.seed},
       {"backend", backend_name(c.backend)},
       {"positivity", c.positivity},
       {"general_r", c.general_r_values},
       {"noise", noise_name(c.noise)},
       {"threshold", c.threshold},
       {"hit_radius", c.hit_radius},
       {"max_iter", c.max_iter},
       {"splitting_tol", c.splitting_tol},
       {"kernels", c.kernels},
       {"pattern", pattern_name(c.pattern)},
       {"nu_range", {c.nu_lo, c.nu_hi}},
       {"nu_tolerance", c.nu_tolerance},
       {"counts", {c.min_count, c.max_count}}};
}

const AggregateRow& ExperimentResult::cell(double delta, int r, bool positive) const {
  for (const auto& a : aggregates) {
    if (a.delta == delta && a.r == r && a.positive == positive) return a;
  }
  throw InvalidParameter("no aggregate cell for delta=" + std::to_string(delta) +
                         " r=" + std::to_string(r));
}

std::vector<AggregateRow> aggregate(const ExperimentConfig& c, const std::vector<TrialRow>& rows) {
  std::vector<AggregateRow> out;
  for (double delta : c.deltas) {
    for (int r : c.r_values) {
      for (bool positive : c.positivity) {
        if (!positive && !c.runs_general(r)) continue;
        AggregateRow a;
        a.delta = delta;
        a.r = r;
        a.positive = positive;
        std::vector<double> loc, h;
        for (const auto& row : rows) {
          if (row.delta != delta || row.r != r || row.positive != positive) continue;
          ++a.trials;
          if (!row.ok) {
            ++a.failures;
            continue;
          }
          loc.push_back(row.loc_mean);
          h.push_back(row.h_l1);
        }
        if (a.trials == 0) continue;
        a.flagged = 10 * a.failures > a.trials;
        auto stats = [](const std::vector<double>& v, double& mean, double& sd) {
          mean = sd = 0.0;
          if (v.empty()) {
            mean = std::numeric_limits<double>::quiet_NaN();
            return;
          }
          for (double x : v) mean += x;
          mean /= static_cast<double>(v.size());
          if (v.size() < 2) return;
          for (double x : v) sd += (x - mean) * (x - mean);
          sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
        };
        stats(loc, a.loc_mean, a.loc_std);
        stats(h, a.h_l1_mean, a.h_l1_std);
        out.push_back(a);
      }
    }
  }
  return out;
}

ExperimentResult run_demo_1d(const ExperimentConfig& config, const std::filesystem::path& out) {
  config.validate();
  if (config.dimension != 1) throw InvalidParameter("run_demo_1d: dimension must be 1");
  ExperimentResult result{config, {}, {}};
  result.config.deltas = {config.deltas.front()};
  result.config.r_values = {config.r_values.front()};
  result.config.positivity = {config.positivity.front()};
  const auto& c = result.config;
  if (!out.empty()) std::filesystem::create_directories(out);

  Dump1D dump;
  if (!out.empty()) {
    dump = [&](const Task& t, const Instance1D& inst, const RecoveryReport& rep) {
      auto f1 = open_out(prefixed(out, t.trial, "truth.csv"));
      write_csv(f1, inst.truth);
      auto f2 = open_out(prefixed(out, t.trial, "measurement.csv"));
      write_csv(f2, inst.measurement);
      auto f3 = open_out(prefixed(out, t.trial, "estimate.csv"));
      write_estimate_csv(f3, rep.estimate, c.window, c.grid_n);
      auto f4 = open_out(prefixed(out, t.trial, "report.json"));
      f4 << nlohmann::json(rep).dump(2) << '\n';
    };
  }
  std::vector<Task> tasks;
  for (int i = 0; i < c.trials; ++i) tasks.push_back({i, 0, c.r_values.front(), c.positivity.front()});
  result.rows = run_tasks(c, tasks, [&](const Task& t) { return run_task_1d(c, t, dump); });
  result.aggregates = aggregate(c, result.rows);
  return result;
}

ExperimentResult run_demo_2d(const ExperimentConfig& config, const std::filesystem::path& out) {
  config.validate();
  if (config.dimension != 2) throw InvalidParameter("run_demo_2d: dimension must be 2");
  ExperimentResult result{config, {}, {}};
  result.config.deltas = {config.deltas.front()};
  result.config.r_values = {config.r_values.front()};
  result.config.positivity = {config.positivity.front()};
  const auto& c = result.config;
  if (!out.empty()) std::filesystem::create_directories(out);

  Dump2D dump;
  if (!out.empty()) {
    dump = [&](const Task& t, const Instance2D& inst, const RecoveryReport& rep) {
      auto f1 = open_out(prefixed(out, t.trial, "truth.csv"));
      write_csv(f1, inst.truth);
      auto f2 = open_out(prefixed(out, t.trial, "measurement.csv"));
      write_csv(f2, inst.measurement);
      // Recovered support only: grid points above the extraction threshold.
      auto f3 = open_out(prefixed(out, t.trial, "recovered.csv"));
      f3 << "k1,k2,t1,t2,x\n";
      f3.precision(17);
      double peak = 0.0;
      for (double v : rep.estimate) peak = std::max(peak, std::abs(v));
      const Rect rect{c.window, c.window};
      for (int64_t k1 = rect.rows.lo; k1 <= rect.rows.hi; ++k1) {
        for (int64_t k2 = rect.cols.lo; k2 <= rect.cols.hi; ++k2) {
          const double v = rep.estimate[rect.offset(k1, k2)];
          if (peak > 0.0 && std::abs(v) >= c.threshold * peak) {
            f3 << k1 << ',' << k2 << ',' << static_cast<double>(k1) / c.grid_n << ','
               << static_cast<double>(k2) / c.grid_n << ',' << v << '\n';
          }
        }
      }
      auto f4 = open_out(prefixed(out, t.trial, "report.json"));
      nlohmann::json j = rep;
      j.erase("estimate");
      j.erase("h");
      f4 << j.dump(2) << '\n';
    };
  }
  std::vector<Task> tasks;
  for (int i = 0; i < c.trials; ++i) tasks.push_back({i, 0, c.r_values.front(), c.positivity.front()});
  result.rows = run_tasks(c, tasks, [&](const Task& t) { return run_task_2d(c, t, dump); });
  result.aggregates = aggregate(c, result.rows);
  return result;
}

ExperimentResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result{config, {}, {}};
  const auto& c = result.config;
  std::vector<Task> tasks;
  for (int r : c.r_values) {
    for (int trial = 0; trial < c.trials; ++trial) {
      for (std::size_t d = 0; d < c.deltas.size(); ++d) {
        for (bool positive : c.positivity) {
          if (!positive && !c.runs_general(r)) continue;
          tasks.push_back({trial, d, r, positive});
        }
      }
    }
  }
  if (c.dimension == 1) {
    result.rows = run_tasks(c, tasks, [&](const Task& t) { return run_task_1d(c, t, {}); });
  } else {
    result.rows = run_tasks(c, tasks, [&](const Task& t) { return run_task_2d(c, t, {}); });
  }
  result.aggregates = aggregate(c, result.rows);
  return result;
}

CertificateStudy run_certificate_study(const ExperimentConfig& config) {
  config.validate();
  CertificateStudy study;
  SeparationOptions o;
  o.pattern = config.pattern;
  o.lo = config.nu_lo;
  o.hi = config.nu_hi;
  o.tolerance = config.nu_tolerance;
  o.min_count = config.min_count;
  o.max_count = config.max_count;
  for (const auto& name : config.kernels) {
    const Kernel kernel = make_kernel(name, config.sigma);
    try {
      auto res = minimal_separation_search(kernel, o);
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& p : res.trace) {
        if (p.passed && p.nu == res.nu_star) margin = std::min(margin, p.worst_margin);
      }
      study.margins.push_back(margin);
      study.results.push_back(std::move(res));
    } catch (const RangeExhausted& e) {
      study.failures.emplace_back(name, e.what());
    }
  }
  return study;
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRow>& rows) {
  os << "trial,seed,delta,r,positive,status,ok,objective,h_l1,truth_l1,loc_mean,loc_hausdorff,"
        "true_count,recovered_count,hits,snr_db,iterations,nu_effective,runtime_s\n";
  os.precision(17);
  for (const auto& r : rows) {
    os << r.trial << ',' << r.seed << ',' << r.delta << ',' << r.r << ',' << (r.positive ? 1 : 0)
       << ',' << r.status << ',' << (r.ok ? 1 : 0) << ',' << r.objective << ',' << r.h_l1 << ','
       << r.truth_l1 << ',' << r.loc_mean << ',' << r.loc_hausdorff << ',' << r.true_count << ','
       << r.recovered_count << ',' << r.hits << ',' << r.snr_db << ',' << r.iterations << ','
       << r.nu_effective << ',' << r.runtime_s << '\n';
  }
}

void write_aggregates_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "delta,r,positive,trials,failures,flagged,loc_mean,loc_std,h_l1_mean,h_l1_std\n";
  os.precision(17);
  for (const auto& a : rows) {
    os << a.delta << ',' << a.r << ',' << (a.positive ? 1 : 0) << ',' << a.trials << ','
       << a.failures << ',' << (a.flagged ? 1 : 0) << ',' << a.loc_mean << ',' << a.loc_std << ','
       << a.h_l1_mean << ',' << a.h_l1_std << '\n';
  }
}

void write_study_csv(std::ostream& os, const CertificateStudy& study) {
  os << "kernel,pattern,nu_star,margin\n";
  os.precision(17);
  for (std::size_t i = 0; i < study.results.size(); ++i) {
    const auto& r = study.results[i];
    os << r.kernel << ',' << pattern_name(r.pattern) << ',' << r.nu_star << ',' << study.margins[i]
       << '\n';
  }
  for (const auto& [name, what] : study.failures) os << name << ",,range_exhausted,\n";
}

void write_study_trace_csv(std::ostream& os, const CertificateStudy& study) {
  os << "kernel,count,nu,passed,worst_margin\n";
  os.precision(17);
  for (const auto& r : study.results) {
    for (const auto& p : r.trace) {
      os << r.kernel << ',' << p.count << ',' << p.nu << ',' << (p.passed ? 1 : 0) << ','
         << p.worst_margin << '\n';
    }
  }
}

void write_result_json(std::ostream& os, const ExperimentResult& result) {
  auto finite = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& r : result.rows) {
    trials.push_back({{"trial", r.trial},
                      {"seed", r.seed},
                      {"delta", r.delta},
                      {"r", r.r},
                      {"positive", r.positive},
                      {"status", r.status},
                      {"ok", r.ok},
                      {"objective", r.objective},
                      {"h_l1", r.h_l1},
                      {"truth_l1", r.truth_l1},
                      {"loc_mean", r.loc_mean},
                      {"loc_hausdorff", r.loc_hausdorff},
                      {"true_count", r.true_count},
                      {"recovered_count", r.recovered_count},
                      {"hits", r.hits},
                      {"snr_db", finite(r.snr_db)},
                      {"iterations", r.iterations},
                      {"nu_effective", r.nu_effective}});
  }
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : result.aggregates) {
    aggs.push_back({{"delta", a.delta},
                    {"r", a.r},
                    {"positive", a.positive},
                    {"trials", a.trials},
                    {"failures", a.failures},
                    {"flagged", a.flagged},
                    {"loc_mean", finite(a.loc_mean)},
                    {"loc_std", a.loc_std},
                    {"h_l1_mean", finite(a.h_l1_mean)},
                    {"h_l1_std", a.h_l1_std}});
  }
  nlohmann::json j = {{"config", result.config}, {"trials", trials}, {"aggregates", aggs}};
  os << j.dump(2) << '\n';
}

}  // namespace pulserec
