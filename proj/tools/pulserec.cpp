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
// Command line front end for the experiment runners.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pulserec/certificates.hpp"
#include "pulserec/error.hpp"
#include "pulserec/experiments.hpp"
#include "pulserec/kernel.hpp"

namespace fs = std::filesystem;
using namespace pulserec;

namespace {

struct Overrides {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  std::optional<std::string> backend;
  std::optional<std::string> kernel;
  std::optional<double> sigma;
  std::vector<double> delta;
  std::vector<int> r;
  std::optional<double> nu;
  std::optional<int> grid_n;
  std::optional<int> trials;
  std::optional<int> threads;
  std::optional<long> max_iter;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON config; keys absent keep the defaults")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--backend", o.backend, "LP backend")
      ->check(CLI::IsMember({"simplex", "splitting"}));
  app->add_option("--kernel", o.kernel, "pulse shape")->check(CLI::IsMember({"gaussian", "cauchy"}));
  app->add_option("--sigma", o.sigma, "kernel width");
  app->add_option("--delta", o.delta, "noise level(s)");
  app->add_option("--r", o.r, "regularity level(s)");
  app->add_option("--nu", o.nu, "separation constant");
  app->add_option("--grid-n", o.grid_n, "grid density N");
  app->add_option("--trials", o.trials, "instances per cell");
  app->add_option("--threads", o.threads, "worker threads, 0 for all cores");
  app->add_option("--max-iter", o.max_iter, "solver iteration cap");
}

ExperimentConfig resolve(ExperimentConfig c, const Overrides& o) {
  if (!o.config.empty()) c = load_config(o.config, c);
  if (o.seed) c.seed = *o.seed;
  if (o.backend) c.backend = parse_backend(*o.backend);
  if (o.kernel) {
    c.kernel = *o.kernel;
    c.kernels = {*o.kernel};
  }
  if (o.sigma) c.sigma = *o.sigma;
  if (!o.delta.empty()) c.deltas = o.delta;
  if (!o.r.empty()) c.r_values = o.r;
  if (o.nu) c.nu = *o.nu;
  if (o.grid_n) c.grid_n = *o.grid_n;
  if (o.trials) c.trials = *o.trials;
  if (o.threads) c.threads = *o.threads;
  if (o.max_iter) c.max_iter = *o.max_iter;
  c.validate();
  return c;
}

std::ofstream open_file(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw InvalidParameter("cannot write " + p.string());
  return f;
}

void write_experiment(const fs::path& out, const ExperimentResult& res) {
  fs::create_directories(out);
  auto t = open_file(out / "trials.csv");
  write_trials_csv(t, res.rows);
  auto a = open_file(out / "aggregates.csv");
  write_aggregates_csv(a, res.aggregates);
  auto j = open_file(out / "result.json");
  write_result_json(j, res);
}

void print_trials(const ExperimentResult& res) {
  for (const auto& r : res.rows) {
    std::printf("trial %d delta=%g r=%d %s: %s h_l1=%.4g loc=%.4g hits=%zu/%zu (%.2fs)\n", r.trial,
                r.delta, r.r, r.positive ? "positive" : "general", r.status.c_str(), r.h_l1,
                r.loc_mean, r.hits, r.true_count, r.runtime_s);
  }
}

void print_aggregates(const ExperimentResult& res) {
  std::printf("%8s %3s %9s %7s %12s %12s\n", "delta", "r", "arm", "trials", "loc_mean", "h_l1_mean");
  for (const auto& a : res.aggregates) {
    std::printf("%8g %3d %9s %7zu %12.5g %12.5g%s\n", a.delta, a.r,
                a.positive ? "positive" : "general", a.trials, a.loc_mean, a.h_l1_mean,
                a.flagged ? "  [flagged]" : "");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse stream recovery by l1 minimization, with certificate tools"};
  app.require_subcommand(1);

  Overrides o1, o2, os, oc, ob, oa;
  auto* demo1d = app.add_subcommand("demo1d", "recover random 1D instances and dump them");
  add_common(demo1d, o1);
  auto* demo2d = app.add_subcommand("demo2d", "recover random 2D instances and dump them");
  add_common(demo2d, o2);
  auto* sweep = app.add_subcommand("sweep", "localization error against noise level");
  add_common(sweep, os);
  auto* certify = app.add_subcommand("certify", "minimal separation search per kernel");
  add_common(certify, oc);
  std::string pattern;
  certify->add_option("--pattern", pattern, "node sign pattern")
      ->check(CLI::IsMember({"positive", "alternating"}));
  auto* bound = app.add_subcommand("bound", "evaluate the stability constant");
  add_common(bound, ob);
  auto* admiss = app.add_subcommand("admissibility", "check kernel admissibility conditions");
  add_common(admiss, oa);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*demo1d) {
      const auto c = resolve(ExperimentConfig::demo_1d(), o1);
      const fs::path out = o1.out.empty() ? fs::path("out/demo1d") : fs::path(o1.out);
      const auto res = run_demo_1d(c, out);
      write_experiment(out, res);
      print_trials(res);
    } else if (*demo2d) {
      const auto c = resolve(ExperimentConfig::demo_2d(), o2);
      const fs::path out = o2.out.empty() ? fs::path("out/demo2d") : fs::path(o2.out);
      const auto res = run_demo_2d(c, out);
      write_experiment(out, res);
      print_trials(res);
    } else if (*sweep) {
      const auto c = resolve(ExperimentConfig::sweep(), os);
      const fs::path out = os.out.empty() ? fs::path("out/sweep") : fs::path(os.out);
      const auto res = run_sweep(c);
      write_experiment(out, res);
      print_aggregates(res);
    } else if (*certify) {
      auto c = resolve(ExperimentConfig::certify(), oc);
      if (!pattern.empty()) c.pattern = parse_pattern(pattern);
      const fs::path out = oc.out.empty() ? fs::path("out/certify") : fs::path(oc.out);
      const auto study = run_certificate_study(c);
      fs::create_directories(out);
      auto f = open_file(out / "certificates.csv");
      write_study_csv(f, study);
      auto t = open_file(out / "certificate_trace.csv");
      write_study_trace_csv(t, study);
      for (std::size_t i = 0; i < study.results.size(); ++i) {
        std::printf("%s (%s): nu* = %.4f\n", study.results[i].kernel.c_str(),
                    std::string(pattern_name(study.results[i].pattern)).c_str(),
                    study.results[i].nu_star);
      }
      for (const auto& [name, what] : study.failures) {
        std::printf("%s: %s\n", name.c_str(), what.c_str());
      }
    } else if (*bound) {
      const auto c = resolve(ExperimentConfig::demo_1d(), ob);
      const Kernel k = make_kernel(c.kernel, c.sigma);
      nlohmann::json j = nlohmann::json::array();
      for (int r : c.r_values) {
        for (double d : c.deltas) j.push_back(theorem_bound(k, r, c.nu, c.grid_n, d));
      }
      std::cout << j.dump(2) << '\n';
      if (!ob.out.empty()) {
        fs::create_directories(ob.out);
        auto f = open_file(fs::path(ob.out) / "bound.json");
        f << j.dump(2) << '\n';
      }
    } else if (*admiss) {
      const auto c = resolve(ExperimentConfig::certify(), oa);
      nlohmann::json j = nlohmann::json::array();
      for (const auto& name : c.kernels) {
        const auto rep = verify_admissibility(make_kernel(name, c.sigma));
        j.push_back(rep);
        std::printf("%s: %s\n", name.c_str(), rep.all_passed() ? "admissible" : "NOT admissible");
        for (const auto& chk : rep.checks) {
          std::printf("  %-24s %s  margin %.3g\n", chk.name.c_str(), chk.passed ? "ok  " : "FAIL",
                      chk.worst_margin);
        }
      }
      if (!oa.out.empty()) {
        fs::create_directories(oa.out);
        auto f = open_file(fs::path(oa.out) / "admissibility.json");
        f << j.dump(2) << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
