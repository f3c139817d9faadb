// Copyright 2026 The VQM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "handles.hpp"
#include "json_config.hpp"
#include "vqm/vqm.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace vqm_cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(vqm_status s) {
  switch (s) {
  case VQM_OK:
    return kExitOk;
  case VQM_ERR_NUMERICAL:
  case VQM_ERR_TRAINING:
  case VQM_ERR_INTERNAL:
    return kExitNumerical;
  case VQM_ERR_IO:
  case VQM_ERR_PARSE:
  case VQM_ERR_VALIDATION:
  case VQM_ERR_VERSION:
    return kExitIo;
  default:
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// Small utilities

double median(std::vector<double> v) {
  if (v.empty())
    return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void write_atomic(const fs::path &path, const std::string &content) {
  std::error_code ec;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp." + std::to_string(std::hash<std::thread::id>{}(
                                                      std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out)
      throw IoError("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

/// Runs body(i) for i in [0, count) on up to jobs threads; rethrows the
/// first failure after all workers stop.
template <class F> void parallel_for(std::size_t count, int jobs, F &&body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        {
          std::lock_guard<std::mutex> lock(mu);
          if (failure)
            return;
        }
        const std::size_t i = next.fetch_add(1);
        if (i >= count)
          return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

std::string fmt(double v, const char *spec = "%.6e") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

json number_or_string(const std::string &s) {
  if (s == "true")
    return true;
  if (s == "false")
    return false;
  char *end = nullptr;
  const long long i = std::strtoll(s.c_str(), &end, 10);
  if (!s.empty() && end == s.c_str() + s.size())
    return i;
  const double v = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size())
    return v;
  return s;
}

/// Every option of the subcommand with its effective value.
json resolved_config(const CLI::App *app) {
  json out = json::object();
  for (const CLI::Option *opt : app->get_options({})) {
    if (opt->get_lnames().empty())
      continue;
    const std::string &name = opt->get_lnames().front();
    if (name == "help" || name == "config")
      continue;
    std::vector<std::string> values;
    if (opt->count() > 0)
      values = opt->results();
    else if (!opt->get_default_str().empty())
      values.push_back(opt->get_default_str());
    if (values.size() == 1 && opt->get_items_expected_max() <= 1) {
      out[name] = number_or_string(values.front());
    } else if (!values.empty()) {
      // Vector defaults are captured as "[a,b,c]".
      if (values.size() == 1 && values.front().size() >= 2 && values.front().front() == '[') {
        std::string inner = values.front().substr(1, values.front().size() - 2);
        values.clear();
        std::stringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ','))
          values.push_back(item);
      }
      json arr = json::array();
      for (const auto &v : values)
        if (v != "{}")
          arr.push_back(number_or_string(v));
      out[name] = arr;
    } else {
      out[name] = nullptr;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared option groups

struct SystemOpts {
  std::string system = "sho";
  double omega = 0.5;
  int qubits = 4;
  std::string hamiltonian;
  std::string order = "chemist";
  int electrons = -1;
};

struct AnsatzOpts {
  std::string kind = "hea";
  int layers = 5;
};

struct OptOpts {
  std::string kind = "adam";
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_iter = 1000;
  double tol = 1e-7;
  int theta_stride = 1;

  vqm_optimizer_config to_c() const {
    vqm_optimizer_config c;
    vqm_optimizer_config_default(&c);
    c.kind = kind == "sgd" ? VQM_OPT_SGD : VQM_OPT_ADAM;
    c.learning_rate = lr;
    c.beta1 = beta1;
    c.beta2 = beta2;
    c.epsilon = epsilon;
    c.max_iterations = max_iter;
    c.tolerance = tol;
    c.theta_stride = theta_stride;
    return c;
  }
};

struct InitOpts {
  std::string kind = "random";
  double scale = 1.0;
  std::string model;
  int steps = 3;
};

struct RunOpts {
  std::string config;
  int threads = 1;
  int jobs = 1;
  std::string out;
  int seeds = 1;
  std::vector<std::uint64_t> seed_list;
  std::string reference = "exact";

  std::vector<std::uint64_t> resolved_seeds() const {
    if (!seed_list.empty())
      return seed_list;
    std::vector<std::uint64_t> s;
    for (int i = 0; i < seeds; ++i)
      s.push_back(static_cast<std::uint64_t>(i));
    return s;
  }
};

void add_common(CLI::App *app, RunOpts &r, const std::string &default_out) {
  app->add_option("--config", r.config, "JSON config file (keys are long option names)");
  r.out = default_out;
  app->add_option("--threads", r.threads, "Worker threads per run")
      ->envname("VQM_THREADS")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", r.out, "Output directory");
}

void add_seeds(CLI::App *app, RunOpts &r) {
  app->add_option("--seeds", r.seeds, "Number of seeds (0 .. N-1)")->check(CLI::PositiveNumber);
  app->add_option("--seed-list", r.seed_list, "Explicit seed list (overrides --seeds)")
      ->delimiter(',');
  app->add_option("--jobs", r.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
}

void add_system(CLI::App *app, SystemOpts &s) {
  app->add_option("--system", s.system, "Hamiltonian source")
      ->check(CLI::IsMember({"sho", "pauli", "fcidump"}));
  app->add_option("--omega", s.omega, "Oscillator frequency")->check(CLI::PositiveNumber);
  app->add_option("--qubits", s.qubits, "Oscillator register size")
      ->check(CLI::PositiveNumber);
  app->add_option("--hamiltonian", s.hamiltonian, "Pauli-sum or FCIDUMP file");
  app->add_option("--order", s.order, "FCIDUMP two-body index order")
      ->check(CLI::IsMember({"chemist", "physicist"}));
  app->add_option("--electrons", s.electrons, "Electron count for UCCSD (overrides FCIDUMP)");
}

void add_ansatz(CLI::App *app, AnsatzOpts &a) {
  app->add_option("--ansatz", a.kind, "Ansatz family")->check(CLI::IsMember({"hea", "uccsd"}));
  app->add_option("--layers", a.layers, "HEA layers")->check(CLI::PositiveNumber);
}

void add_optimizer(CLI::App *app, OptOpts &o) {
  app->add_option("--opt", o.kind, "Optimizer")->check(CLI::IsMember({"adam", "sgd"}));
  app->add_option("--lr", o.lr, "Learning rate")->check(CLI::PositiveNumber);
  app->add_option("--beta1", o.beta1, "Adam beta1");
  app->add_option("--beta2", o.beta2, "Adam beta2");
  app->add_option("--epsilon", o.epsilon, "Adam epsilon");
  app->add_option("--max-iter", o.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  app->add_option("--tol", o.tol, "Stop when the objective changes by less than this")
      ->check(CLI::PositiveNumber);
  app->add_option("--theta-stride", o.theta_stride, "Parameter trace stride (0: off)")
      ->check(CLI::NonNegativeNumber);
}

void add_init(CLI::App *app, InitOpts &i) {
  app->add_option("--init", i.kind, "Initialization")
      ->check(CLI::IsMember({"zero", "random", "meta"}));
  app->add_option("--init-scale", i.scale,
                  "Random init draws uniformly from [-s*pi, s*pi]")
      ->check(CLI::PositiveNumber);
  app->add_option("--model", i.model, "Meta-learner model file (init = meta)");
  app->add_option("--steps", i.steps, "Diffusion (unroll) steps for meta init")
      ->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------------------
// Problem construction

struct Problem {
  PauliSum h;
  Ansatz a;
  int n_qubits = 0;
  int n_params = 0;
  std::optional<double> exact;
  std::string label;
};

PauliSum load_hamiltonian(const SystemOpts &s, int *electrons_out) {
  vqm_pauli_sum *p = nullptr;
  if (s.system == "sho") {
    check(vqm_sho_create(s.omega, s.qubits, &p));
  } else {
    if (s.hamiltonian.empty())
      throw UsageError("--hamiltonian is required for --system " + s.system);
    if (!fs::exists(s.hamiltonian))
      throw IoError("no such file: " + s.hamiltonian);
    if (s.system == "pauli") {
      check(vqm_pauli_sum_load(s.hamiltonian.c_str(), &p));
    } else {
      int ne = 0;
      check(vqm_fcidump_load(s.hamiltonian.c_str(),
                             s.order == "physicist" ? VQM_PHYSICIST : VQM_CHEMIST, &p, &ne));
      if (electrons_out != nullptr)
        *electrons_out = ne;
    }
  }
  return PauliSum(p);
}

Problem make_problem(const SystemOpts &s, const AnsatzOpts &a, bool want_exact) {
  Problem pr;
  int electrons = -1;
  pr.h = load_hamiltonian(s, &electrons);
  pr.n_qubits = num_qubits(pr.h.get());
  if (s.electrons >= 0)
    electrons = s.electrons;
  vqm_ansatz *ap = nullptr;
  if (a.kind == "hea") {
    check(vqm_ansatz_hea(pr.n_qubits, a.layers, &ap));
  } else {
    if (electrons < 0)
      throw UsageError("UCCSD needs --electrons (or an FCIDUMP header)");
    check(vqm_ansatz_uccsd(pr.n_qubits, electrons, &ap));
  }
  pr.a = Ansatz(ap);
  pr.n_params = num_params(pr.a.get());
  if (want_exact && pr.n_qubits <= 12) {
    double e = 0.0;
    check(vqm_ground_energy(pr.h.get(), &e));
    pr.exact = e;
  }
  pr.label = s.system == "sho" ? "sho omega=" + fmt(s.omega, "%g") +
                                     " qubits=" + std::to_string(s.qubits)
                               : s.hamiltonian;
  return pr;
}

Meta load_model(const std::string &path) {
  if (path.empty())
    throw UsageError("--model is required for meta initialization");
  if (!fs::exists(path))
    throw IoError("no such model file: " + path);
  vqm_meta *m = nullptr;
  check(vqm_meta_load(path.c_str(), &m));
  return Meta(m);
}

int init_code(const std::string &kind) {
  return kind == "zero" ? VQM_INIT_ZERO : kind == "meta" ? VQM_INIT_META : VQM_INIT_RANDOM;
}

/// Initial parameters for one seed. Meta predictions are deterministic and
/// computed by the caller once per problem.
std::vector<double> initial_theta(const InitOpts &init, const Problem &pr, std::uint64_t seed,
                                  const std::vector<double> *meta_theta) {
  if (init.kind == "meta")
    return *meta_theta;
  std::vector<double> theta(static_cast<std::size_t>(pr.n_params));
  check(vqm_initial_parameters(init_code(init.kind), theta.size(), seed, init.scale,
                               theta.data()));
  return theta;
}

std::vector<double> meta_predict(const vqm_context *ctx, const vqm_meta *m, const Problem &pr,
                                 int steps, int *evaluations = nullptr) {
  std::vector<double> theta(static_cast<std::size_t>(pr.n_params));
  check(vqm_meta_predict(ctx, m, pr.h.get(), pr.a.get(), steps, theta.data(), evaluations));
  return theta;
}

RunResult run_vqe_once(const Problem &pr, const std::vector<double> &theta0,
                       const OptOpts &opt, int threads, int init_kind, std::uint64_t seed) {
  auto ctx = make_context(threads);
  const auto cfg = opt.to_c();
  vqm_run *r = nullptr;
  const vqm_status st =
      vqm_run_vqe(ctx.get(), pr.h.get(), pr.a.get(), theta0.data(), theta0.size(), &cfg, &r);
  Run run(r);
  if (st != VQM_OK) {
    const std::string msg = vqm_last_error();
    throw ApiError(st, "seed " + std::to_string(seed) + ": " + msg);
  }
  check(vqm_run_set_origin(run.get(), init_kind, seed));
  return collect(std::move(run));
}

json run_json(const RunResult &r, std::optional<double> exact) {
  json j = json::parse(r.summary);
  if (exact)
    j["abs_error"] = std::abs(r.final_energy - *exact);
  return j;
}

// ---------------------------------------------------------------------------
// vqe

struct VqeCmd {
  SystemOpts sys;
  AnsatzOpts ans;
  OptOpts opt;
  InitOpts init;
  RunOpts run;

  void attach(CLI::App *app) {
    add_common(app, run, "out/vqe");
    add_seeds(app, run);
    add_system(app, sys);
    add_ansatz(app, ans);
    add_optimizer(app, opt);
    add_init(app, init);
    app->add_option("--reference", run.reference, "Reference energy source")
        ->check(CLI::IsMember({"exact", "none"}));
  }

  int operator()(const CLI::App *app) {
    const auto pr = make_problem(sys, ans, run.reference == "exact");
    const auto seeds = run.resolved_seeds();
    std::vector<double> meta_theta;
    if (init.kind == "meta") {
      auto model = load_model(init.model);
      auto ctx = make_context(run.threads);
      meta_theta = meta_predict(ctx.get(), model.get(), pr, init.steps);
    }
    std::vector<RunResult> results(seeds.size());
    parallel_for(seeds.size(), run.jobs, [&](std::size_t i) {
      const auto theta0 = initial_theta(init, pr, seeds[i], &meta_theta);
      results[i] = run_vqe_once(pr, theta0, opt, run.threads, init_code(init.kind), seeds[i]);
    });

    const fs::path dir(run.out);
    json runs = json::array();
    std::vector<double> errs, iters, times, energies;
    std::printf("vqe: %s, ansatz %s, %d params, init %s, %zu seed(s)\n", pr.label.c_str(),
                ans.kind.c_str(), pr.n_params, init.kind.c_str(), seeds.size());
    std::printf("%6s %22s %12s %6s %5s %9s\n", "seed", "final_energy", "abs_error", "iters",
                "conv", "time_s");
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto &r = results[i];
      write_atomic(dir / ("trace_" + std::to_string(seeds[i]) + ".csv"), r.csv);
      runs.push_back(run_json(r, pr.exact));
      energies.push_back(r.final_energy);
      iters.push_back(r.iterations);
      times.push_back(r.wall_time);
      const double err = pr.exact ? std::abs(r.final_energy - *pr.exact) : std::nan("");
      errs.push_back(err);
      std::printf("%6llu %22.15f %12.4e %6d %5s %9.3f\n",
                  static_cast<unsigned long long>(seeds[i]), r.final_energy, err,
                  r.iterations, r.converged ? "yes" : "no", r.wall_time);
    }
    json agg;
    agg["init"] = init.kind;
    agg["runs"] = seeds.size();
    agg["median_final_energy"] = median(energies);
    if (pr.exact)
      agg["median_abs_error"] = median(errs);
    agg["median_iterations"] = median(iters);
    agg["median_wall_time_s"] = median(times);
    std::printf("median: abs_error %s, iterations %g, time %.3f s\n",
                pr.exact ? fmt(median(errs), "%.4e").c_str() : "n/a", median(iters),
                median(times));

    json summary;
    summary["command"] = "vqe";
    summary["config"] = resolved_config(app);
    summary["system"] = pr.label;
    summary["num_qubits"] = pr.n_qubits;
    summary["num_params"] = pr.n_params;
    summary["exact_ground_energy"] = pr.exact ? json(*pr.exact) : json(nullptr);
    summary["aggregate"] = agg;
    summary["runs"] = runs;
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// lr-scan

struct LrScanCmd {
  SystemOpts sys;
  AnsatzOpts ans;
  OptOpts opt;
  InitOpts init;
  RunOpts run;
  std::vector<std::string> grid = {"1e-3", "3e-4", "1e-4", "3e-5", "1e-5", "3e-6", "1e-6"};

  void attach(CLI::App *app) {
    add_common(app, run, "out/lr-scan");
    add_seeds(app, run);
    run.seeds = 5;
    add_system(app, sys);
    add_ansatz(app, ans);
    add_optimizer(app, opt);
    add_init(app, init);
    app->add_option("--grid", grid, "Learning rates")->delimiter(',');
  }

  int operator()(const CLI::App *app) {
    std::vector<double> lrs;
    for (const auto &g : grid) {
      char *end = nullptr;
      const double v = std::strtod(g.c_str(), &end);
      if (end != g.c_str() + g.size() || !(v > 0.0))
        throw UsageError("invalid learning rate in --grid: " + g);
      lrs.push_back(v);
    }
    if (lrs.empty())
      throw UsageError("--grid must not be empty");
    const auto pr = make_problem(sys, ans, true);
    if (!pr.exact)
      throw UsageError("lr-scan needs an exact reference (n <= 12)");
    const auto seeds = run.resolved_seeds();
    std::vector<double> meta_theta;
    if (init.kind == "meta") {
      auto model = load_model(init.model);
      auto ctx = make_context(run.threads);
      meta_theta = meta_predict(ctx.get(), model.get(), pr, init.steps);
    }

    std::printf("lr-scan grid:");
    for (const auto &g : grid)
      std::printf(" %s", g.c_str());
    std::printf("\n");

    const std::size_t n_runs = lrs.size() * seeds.size();
    std::vector<RunResult> results(n_runs);
    parallel_for(n_runs, run.jobs, [&](std::size_t k) {
      const std::size_t li = k / seeds.size();
      const std::size_t si = k % seeds.size();
      OptOpts o = opt;
      o.lr = lrs[li];
      const auto theta0 = initial_theta(init, pr, seeds[si], &meta_theta);
      results[k] = run_vqe_once(pr, theta0, o, run.threads, init_code(init.kind), seeds[si]);
    });

    const fs::path dir(run.out);
    struct Row {
      double energy, err, iters, time;
    };
    std::vector<Row> rows;
    json runs = json::array();
    for (std::size_t li = 0; li < lrs.size(); ++li) {
      std::vector<double> e, err, it, t;
      for (std::size_t si = 0; si < seeds.size(); ++si) {
        const auto &r = results[li * seeds.size() + si];
        write_atomic(dir / ("lr_" + grid[li]) / ("trace_" + std::to_string(seeds[si]) + ".csv"),
                     r.csv);
        auto j = run_json(r, pr.exact);
        j["learning_rate"] = lrs[li];
        runs.push_back(j);
        e.push_back(r.final_energy);
        err.push_back(std::abs(r.final_energy - *pr.exact));
        it.push_back(r.iterations);
        t.push_back(r.wall_time);
      }
      rows.push_back({median(e), median(err), median(it), median(t)});
    }
    std::size_t best = 0;
    for (std::size_t li = 1; li < rows.size(); ++li)
      if (rows[li].err < rows[best].err)
        best = li;

    std::ostringstream csv;
    csv << "lr,median_final_energy,median_abs_error,median_iterations,median_wall_time_s,best\n";
    std::printf("%10s %22s %14s %10s %10s\n", "lr", "median_energy", "median_abs_err",
                "med_iters", "med_time");
    json table = json::array();
    for (std::size_t li = 0; li < rows.size(); ++li) {
      const auto &r = rows[li];
      csv << grid[li] << ',' << fmt(r.energy, "%.17g") << ',' << fmt(r.err, "%.17g") << ','
          << r.iters << ',' << fmt(r.time, "%.6f") << ',' << (li == best ? 1 : 0) << '\n';
      std::printf("%10s %22.15f %14.4e %10g %10.3f%s\n", grid[li].c_str(), r.energy, r.err,
                  r.iters, r.time, li == best ? "  <- best" : "");
      table.push_back({{"lr", grid[li]},
                       {"median_final_energy", r.energy},
                       {"median_abs_error", r.err},
                       {"median_iterations", r.iters},
                       {"median_wall_time_s", r.time},
                       {"best", li == best}});
    }
    write_atomic(dir / "scan.csv", csv.str());

    json summary;
    summary["command"] = "lr-scan";
    summary["config"] = resolved_config(app);
    summary["grid"] = grid;
    summary["system"] = pr.label;
    summary["exact_ground_energy"] = *pr.exact;
    summary["best_lr"] = grid[best];
    summary["table"] = table;
    summary["runs"] = runs;
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// vqd

struct VqdCmd {
  SystemOpts sys;
  AnsatzOpts ans;
  OptOpts opt;
  InitOpts init;
  RunOpts run;
  std::optional<double> beta;
  std::string ground_init = "random";
  std::uint64_t ground_seed = 0;

  void attach(CLI::App *app) {
    add_common(app, run, "out/vqd");
    add_seeds(app, run);
    run.seeds = 3;
    add_system(app, sys);
    add_ansatz(app, ans);
    opt.lr = 1e-2;
    opt.tol = 1e-11;
    opt.max_iter = 20000;
    add_optimizer(app, opt);
    add_init(app, init);
    app->add_option("--beta", beta, "Overlap penalty weight (default 10*omega for sho)");
    app->add_option("--ground-init", ground_init, "Initialization of the ground-state run")
        ->check(CLI::IsMember({"zero", "random", "meta"}));
    app->add_option("--ground-seed", ground_seed, "Seed of the ground-state run");
  }

  int operator()(const CLI::App *app) {
    const auto pr = make_problem(sys, ans, true);
    double b = 0.0;
    if (beta) {
      b = *beta;
    } else if (sys.system == "sho") {
      b = 10.0 * sys.omega;
    } else {
      throw UsageError("--beta is required for non-oscillator systems");
    }
    if (b < 0.0)
      throw UsageError("--beta must be non-negative");
    if (b == 0.0)
      std::fprintf(stderr, "warning: --beta 0 disables deflation; VQD reduces to VQE\n");

    std::optional<double> excited;
    if (pr.n_qubits <= 12) {
      size_t n = 0;
      std::vector<double> ev(std::size_t{1} << pr.n_qubits);
      check(vqm_eigenvalues(pr.h.get(), ev.data(), ev.size(), &n));
      if (n >= 2)
        excited = ev[1];
    }

    std::vector<double> meta_theta;
    if (init.kind == "meta" || ground_init == "meta") {
      auto model = load_model(init.model);
      auto ctx = make_context(run.threads);
      meta_theta = meta_predict(ctx.get(), model.get(), pr, init.steps);
    }

    // Ground state.
    InitOpts g_init = init;
    g_init.kind = ground_init;
    const auto g0 = initial_theta(g_init, pr, ground_seed, &meta_theta);
    auto ground = run_vqe_once(pr, g0, opt, run.threads, init_code(ground_init), ground_seed);
    const fs::path dir(run.out);
    write_atomic(dir / "ground_trace.csv", ground.csv);
    std::printf("ground: energy %.15f, iterations %d, converged %s\n", ground.final_energy,
                ground.iterations, ground.converged ? "yes" : "no");
    if (!ground.converged)
      throw NumericalError("ground-state VQE did not converge within " +
                           std::to_string(opt.max_iter) + " iterations; VQD not started");

    auto ctx = make_context(run.threads);
    vqm_state *sp = nullptr;
    check(vqm_state_prepare(ctx.get(), pr.a.get(), ground.final_theta.data(),
                            ground.final_theta.size(), &sp));
    State ground_state(sp);

    const auto seeds = run.resolved_seeds();
    std::vector<RunResult> results(seeds.size());
    const auto cfg = opt.to_c();
    parallel_for(seeds.size(), run.jobs, [&](std::size_t i) {
      auto c = make_context(run.threads);
      const auto theta0 = initial_theta(init, pr, seeds[i], &meta_theta);
      const vqm_state *refs[] = {ground_state.get()};
      vqm_run *r = nullptr;
      const vqm_status st = vqm_run_vqd(c.get(), pr.h.get(), pr.a.get(), theta0.data(),
                                        theta0.size(), &cfg, b, refs, 1, &r);
      Run owned(r);
      if (st != VQM_OK)
        throw ApiError(st, "seed " + std::to_string(seeds[i]) + ": " + vqm_last_error());
      check(vqm_run_set_origin(owned.get(), init_code(init.kind), seeds[i]));
      results[i] = collect(std::move(owned));
    });

    json runs = json::array();
    std::vector<double> errs, ovs, iters;
    std::printf("vqd: beta %g, init %s\n", b, init.kind.c_str());
    std::printf("%6s %22s %12s %12s %6s %5s\n", "seed", "final_energy", "abs_error",
                "overlap_sq", "iters", "conv");
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto &r = results[i];
      write_atomic(dir / ("trace_" + std::to_string(seeds[i]) + ".csv"), r.csv);
      runs.push_back(run_json(r, excited));
      const double err = excited ? std::abs(r.final_energy - *excited) : std::nan("");
      errs.push_back(err);
      ovs.push_back(r.final_overlap);
      iters.push_back(r.iterations);
      std::printf("%6llu %22.15f %12.4e %12.4e %6d %5s\n",
                  static_cast<unsigned long long>(seeds[i]), r.final_energy, err,
                  r.final_overlap, r.iterations, r.converged ? "yes" : "no");
    }

    json summary;
    summary["command"] = "vqd";
    summary["config"] = resolved_config(app);
    summary["config"]["beta"] = b;
    summary["system"] = pr.label;
    summary["exact_ground_energy"] = pr.exact ? json(*pr.exact) : json(nullptr);
    summary["exact_excited_energy"] = excited ? json(*excited) : json(nullptr);
    summary["ground"] = run_json(ground, pr.exact);
    summary["aggregate"] = {{"median_abs_error", median(errs)},
                            {"max_overlap_sq", *std::max_element(ovs.begin(), ovs.end())},
                            {"median_iterations", median(iters)}};
    summary["runs"] = runs;
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// meta-train / meta-eval

struct ShoFamily {
  std::vector<double> omegas;
  int qubits = 4;
  int layers = 5;
};

std::vector<Problem> sho_family(const ShoFamily &f) {
  std::vector<Problem> out;
  for (double w : f.omegas) {
    SystemOpts s;
    s.omega = w;
    s.qubits = f.qubits;
    AnsatzOpts a;
    a.layers = f.layers;
    out.push_back(make_problem(s, a, true));
  }
  return out;
}

struct MetaTrainCmd {
  ShoFamily fam{{0.40, 0.45, 0.55, 0.60}, 4, 5};
  std::vector<std::string> extra;
  RunOpts run;
  int d_max = 40;
  int hidden = 64;
  int steps = 3;
  int epochs = 100;
  double meta_lr = 1e-2;
  int batch = 4;
  std::uint64_t seed = 0;

  void attach(CLI::App *app) {
    add_common(app, run, "out/meta");
    app->add_option("--omegas", fam.omegas, "Training oscillator frequencies")->delimiter(',');
    app->add_option("--qubits", fam.qubits, "Oscillator register size")
        ->check(CLI::PositiveNumber);
    app->add_option("--layers", fam.layers, "HEA layers")->check(CLI::PositiveNumber);
    app->add_option("--hamiltonians", extra, "Additional Pauli-sum task files (HEA)")
        ->delimiter(',');
    app->add_option("--d-max", d_max, "Model output dimension")->check(CLI::PositiveNumber);
    app->add_option("--hidden", hidden, "LSTM hidden size")->check(CLI::PositiveNumber);
    app->add_option("--steps", steps, "Unroll steps")->check(CLI::PositiveNumber);
    app->add_option("--epochs", epochs, "Training epochs")->check(CLI::NonNegativeNumber);
    app->add_option("--meta-lr", meta_lr, "Adam learning rate for the model weights")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--batch", batch, "Tasks per update")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Weight-initialization and shuffling seed");
  }

  int operator()(const CLI::App *app) {
    auto tasks = sho_family(fam);
    for (const auto &path : extra) {
      SystemOpts s;
      s.system = "pauli";
      s.hamiltonian = path;
      AnsatzOpts a;
      a.layers = fam.layers;
      tasks.push_back(make_problem(s, a, false));
    }
    if (tasks.empty())
      throw UsageError("meta-train needs at least one task");
    vqm_meta *mp = nullptr;
    check(vqm_meta_create(d_max, hidden, seed, &mp));
    Meta model(mp);

    vqm_meta_train_config cfg;
    vqm_meta_train_config_default(&cfg);
    cfg.unroll_steps = steps;
    cfg.epochs = epochs;
    cfg.meta_learning_rate = meta_lr;
    cfg.batch_size = batch;
    cfg.seed = seed;
    std::vector<const vqm_pauli_sum *> hs;
    std::vector<const vqm_ansatz *> as;
    for (const auto &t : tasks) {
      hs.push_back(t.h.get());
      as.push_back(t.a.get());
    }
    std::vector<double> loss(static_cast<std::size_t>(epochs));
    auto ctx = make_context(run.threads);
    check(vqm_meta_train(ctx.get(), model.get(), hs.data(), as.data(), tasks.size(), &cfg,
                         loss.data()));

    const fs::path dir(run.out);
    fs::create_directories(dir);
    const fs::path model_path = dir / "model.bin";
    const fs::path tmp = model_path.string() + ".tmp";
    check(vqm_meta_save(model.get(), tmp.string().c_str()));
    std::error_code ec;
    fs::rename(tmp, model_path, ec);
    if (ec)
      throw IoError("cannot move model into place at " + model_path.string());

    std::ostringstream csv;
    csv << "epoch,loss\n";
    for (std::size_t e = 0; e < loss.size(); ++e)
      csv << e << ',' << fmt(loss[e], "%.17g") << '\n';
    write_atomic(dir / "loss.csv", csv.str());

    std::printf("meta-train: %zu task(s), %d epoch(s)", tasks.size(), epochs);
    if (!loss.empty())
      std::printf(", loss %.9f -> %.9f", loss.front(), loss.back());
    std::printf("\nmodel written to %s\n", model_path.string().c_str());

    json summary;
    summary["command"] = "meta-train";
    summary["config"] = resolved_config(app);
    json names = json::array();
    for (const auto &t : tasks)
      names.push_back(t.label);
    summary["tasks"] = names;
    summary["loss_curve"] = loss;
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
  }
};

struct MetaEvalCmd {
  ShoFamily fam{{0.5}, 4, 5};
  OptOpts opt;
  RunOpts run;
  InitOpts init;
  std::vector<int> k_sweep;

  void attach(CLI::App *app) {
    add_common(app, run, "out/meta-eval");
    add_seeds(app, run);
    run.seeds = 10;
    app->add_option("--omegas", fam.omegas, "Held-out oscillator frequencies")
        ->delimiter(',');
    app->add_option("--qubits", fam.qubits, "Oscillator register size")
        ->check(CLI::PositiveNumber);
    app->add_option("--layers", fam.layers, "HEA layers")->check(CLI::PositiveNumber);
    add_optimizer(app, opt);
    app->add_option("--model", init.model, "Meta-learner model file")->required();
    app->add_option("--steps", init.steps, "Diffusion steps")->check(CLI::PositiveNumber);
    app->add_option("--init-scale", init.scale, "Random baseline draws from [-s*pi, s*pi]")
        ->check(CLI::PositiveNumber);
    app->add_option("--k-sweep", k_sweep, "Diffusion-step grid (sweep mode)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
  }

  int operator()(const CLI::App *app) {
    auto model = load_model(init.model);
    const auto tasks = sho_family(fam);
    const auto seeds = run.resolved_seeds();
    const fs::path dir(run.out);
    auto ctx = make_context(run.threads);

    json summary;
    summary["command"] = "meta-eval";
    summary["config"] = resolved_config(app);

    if (!k_sweep.empty()) {
      std::ostringstream csv;
      csv << "task,K,energy_evaluations,init_energy,init_abs_error,iterations,final_energy,"
             "final_abs_error,converged\n";
      json rows = json::array();
      std::printf("%10s %4s %6s %14s %8s %14s\n", "task", "K", "evals", "init_abs_err",
                  "iters", "final_abs_err");
      for (const auto &t : tasks) {
        for (int k : k_sweep) {
          int evals = 0;
          const auto theta = meta_predict(ctx.get(), model.get(), t, k, &evals);
          double e0 = 0.0;
          check(vqm_energy(ctx.get(), t.h.get(), t.a.get(), theta.data(), theta.size(), &e0));
          auto r = run_vqe_once(t, theta, opt, run.threads, VQM_INIT_META, 0);
          const double err0 = std::abs(e0 - *t.exact);
          const double err = std::abs(r.final_energy - *t.exact);
          csv << '"' << t.label << "\"," << k << ',' << evals << ',' << fmt(e0, "%.17g") << ','
              << fmt(err0, "%.17g") << ',' << r.iterations << ','
              << fmt(r.final_energy, "%.17g") << ',' << fmt(err, "%.17g") << ','
              << (r.converged ? 1 : 0) << '\n';
          std::printf("%10s %4d %6d %14.4e %8d %14.4e\n", t.label.substr(4, 10).c_str(), k,
                      evals, err0, r.iterations, err);
          rows.push_back({{"task", t.label},
                          {"K", k},
                          {"energy_evaluations", evals},
                          {"init_abs_error", err0},
                          {"iterations", r.iterations},
                          {"final_abs_error", err}});
        }
      }
      write_atomic(dir / "ksweep.csv", csv.str());
      summary["k_sweep"] = rows;
      write_atomic(dir / "summary.json", summary.dump(2) + "\n");
      return kExitOk;
    }

    // Paired comparison: meta init is deterministic per task, random init
    // varies with the seed.
    struct Job {
      std::size_t task;
      bool meta;
      std::uint64_t seed;
    };
    std::vector<Job> jobs;
    std::vector<std::vector<double>> meta_theta;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      meta_theta.push_back(meta_predict(ctx.get(), model.get(), tasks[t], init.steps));
      jobs.push_back({t, true, 0});
      for (auto s : seeds)
        jobs.push_back({t, false, s});
    }
    std::vector<RunResult> results(jobs.size());
    parallel_for(jobs.size(), run.jobs, [&](std::size_t i) {
      const auto &j = jobs[i];
      InitOpts io = init;
      io.kind = j.meta ? "meta" : "random";
      const auto theta0 = initial_theta(io, tasks[j.task], j.seed, &meta_theta[j.task]);
      results[i] = run_vqe_once(tasks[j.task], theta0, opt, run.threads,
                                j.meta ? VQM_INIT_META : VQM_INIT_RANDOM, j.seed);
    });

    std::ostringstream csv;
    csv << "task,init,seed,iterations,final_energy,abs_error,converged,wall_time_s\n";
    std::vector<double> m_it, m_err, r_it, r_err;
    json runs = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto &j = jobs[i];
      const auto &r = results[i];
      const auto &t = tasks[j.task];
      const double err = std::abs(r.final_energy - *t.exact);
      // The deterministic meta run stands for every seed.
      const std::size_t copies = j.meta ? seeds.size() : 1;
      for (std::size_t c = 0; c < copies; ++c) {
        (j.meta ? m_it : r_it).push_back(r.iterations);
        (j.meta ? m_err : r_err).push_back(err);
      }
      csv << '"' << t.label << "\"," << (j.meta ? "meta" : "random") << ',' << j.seed << ','
          << r.iterations << ',' << fmt(r.final_energy, "%.17g") << ',' << fmt(err, "%.17g")
          << ',' << (r.converged ? 1 : 0) << ',' << fmt(r.wall_time, "%.6f") << '\n';
      auto rj = run_json(r, t.exact);
      rj["task"] = t.label;
      runs.push_back(rj);
    }
    write_atomic(dir / "eval.csv", csv.str());
    const double ratio = median(m_it) / median(r_it);
    std::printf("%8s %12s %16s\n", "init", "med_iters", "med_abs_error");
    std::printf("%8s %12g %16.4e\n", "meta", median(m_it), median(m_err));
    std::printf("%8s %12g %16.4e\n", "random", median(r_it), median(r_err));
    std::printf("iteration ratio (meta/random): %.4f\n", ratio);
    summary["meta"] = {{"median_iterations", median(m_it)}, {"median_abs_error", median(m_err)}};
    summary["random"] = {{"median_iterations", median(r_it)},
                         {"median_abs_error", median(r_err)}};
    summary["iteration_ratio"] = ratio;
    summary["runs"] = runs;
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// chem

struct ChemCmd {
  SystemOpts sys;
  AnsatzOpts ans;
  OptOpts opt;
  InitOpts init;
  RunOpts run;
  std::string format = "auto";
  std::uint64_t seed = 0;

  void attach(CLI::App *app) {
    add_common(app, run, "out/chem");
    app->add_option("--hamiltonian", sys.hamiltonian, "Pauli-sum or FCIDUMP file")->required();
    app->add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"auto", "pauli", "fcidump"}));
    app->add_option("--order", sys.order, "FCIDUMP two-body index order")
        ->check(CLI::IsMember({"chemist", "physicist"}));
    app->add_option("--electrons", sys.electrons, "Electron count (overrides FCIDUMP)");
    ans.kind = "uccsd";
    add_ansatz(app, ans);
    opt.lr = 2e-2;
    opt.tol = 1e-12;
    opt.max_iter = 3000;
    add_optimizer(app, opt);
    init.kind = "zero";
    add_init(app, init);
    app->add_option("--seed", seed, "Seed for random initialization");
  }

  static bool looks_like_fcidump(const std::string &path) {
    std::ifstream in(path);
    std::string word;
    in >> word;
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return word.rfind("&FCI", 0) == 0;
  }

  int operator()(const CLI::App *app) {
    if (!fs::exists(sys.hamiltonian))
      throw IoError("no such file: " + sys.hamiltonian);
    sys.system = format == "auto" ? (looks_like_fcidump(sys.hamiltonian) ? "fcidump" : "pauli")
                                  : format;
    const auto pr = make_problem(sys, ans, true);
    std::vector<double> meta_theta;
    if (init.kind == "meta") {
      auto model = load_model(init.model);
      auto ctx = make_context(run.threads);
      meta_theta = meta_predict(ctx.get(), model.get(), pr, init.steps);
    }
    const auto theta0 = initial_theta(init, pr, seed, &meta_theta);
    auto r = run_vqe_once(pr, theta0, opt, run.threads, init_code(init.kind), seed);

    const fs::path dir(run.out);
    write_atomic(dir / "trace.csv", r.csv);
    std::printf("chem: %s (%s), %d qubits, ansatz %s, %d params\n", sys.hamiltonian.c_str(),
                sys.system.c_str(), pr.n_qubits, ans.kind.c_str(), pr.n_params);
    std::printf("final energy  %.12f (iterations %d, converged %s)\n", r.final_energy,
                r.iterations, r.converged ? "yes" : "no");
    json summary;
    summary["command"] = "chem";
    summary["config"] = resolved_config(app);
    summary["format"] = sys.system;
    summary["num_qubits"] = pr.n_qubits;
    summary["num_params"] = pr.n_params;
    summary["run"] = run_json(r, pr.exact);
    if (pr.exact) {
      const double err = std::abs(r.final_energy - *pr.exact);
      const bool bound = r.final_energy >= *pr.exact - 1e-9;
      std::printf("exact ground  %.12f\nabs error     %.3e\n", *pr.exact, err);
      summary["exact_ground_energy"] = *pr.exact;
      summary["abs_error"] = err;
      summary["variational_bound_ok"] = bound;
      if (!bound) {
        write_atomic(dir / "summary.json", summary.dump(2) + "\n");
        throw NumericalError("final energy lies below the exact ground energy");
      }
    }
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// bench-threads

struct BenchCmd {
  std::vector<int> qubits = {12, 14};
  std::vector<int> thread_list = {1, 2, 4, 8};
  int layers = 1;
  int repeats = 3;
  double omega = 0.5;
  std::string hamiltonian;
  std::uint64_t seed = 0;
  RunOpts run;

  void attach(CLI::App *app) {
    add_common(app, run, "out/bench");
    app->add_option("--qubits", qubits, "Register sizes (oscillator workload)")
        ->delimiter(',');
    app->add_option("--thread-list", thread_list, "Thread counts")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    app->add_option("--layers", layers, "HEA layers")->check(CLI::PositiveNumber);
    app->add_option("--repeats", repeats, "Timing repeats (best is kept)")
        ->check(CLI::PositiveNumber);
    app->add_option("--omega", omega, "Oscillator frequency")->check(CLI::PositiveNumber);
    app->add_option("--hamiltonian", hamiltonian, "Pauli-sum file (replaces --qubits)");
    app->add_option("--seed", seed, "Seed of the parameter vector");
  }

  int operator()(const CLI::App *app) {
    std::vector<Problem> problems;
    if (!hamiltonian.empty()) {
      SystemOpts s;
      s.system = "pauli";
      s.hamiltonian = hamiltonian;
      AnsatzOpts a;
      a.layers = layers;
      problems.push_back(make_problem(s, a, false));
    } else {
      for (int n : qubits) {
        SystemOpts s;
        s.omega = omega;
        s.qubits = n;
        AnsatzOpts a;
        a.layers = layers;
        problems.push_back(make_problem(s, a, false));
      }
    }
    std::ostringstream csv;
    csv << "qubits,threads,seconds,speedup,energy,max_abs_diff\n";
    json rows = json::array();
    bool agree = true;
    std::printf("%7s %8s %10s %8s %12s\n", "qubits", "threads", "seconds", "speedup",
                "max_abs_diff");
    for (const auto &pr : problems) {
      std::vector<double> theta(static_cast<std::size_t>(pr.n_params));
      check(vqm_initial_parameters(VQM_INIT_RANDOM, theta.size(), seed, 1.0, theta.data()));
      double base_time = 0.0;
      double base_e = 0.0;
      std::vector<double> base_g;
      for (std::size_t ti = 0; ti < thread_list.size(); ++ti) {
        auto ctx = make_context(thread_list[ti]);
        double best = 1e300;
        double e = 0.0;
        std::vector<double> g(theta.size());
        for (int rep = 0; rep < repeats; ++rep) {
          const auto t0 = std::chrono::steady_clock::now();
          check(vqm_energy(ctx.get(), pr.h.get(), pr.a.get(), theta.data(), theta.size(), &e));
          check(vqm_gradient(ctx.get(), pr.h.get(), pr.a.get(), theta.data(), theta.size(),
                             g.data()));
          const double s =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          best = std::min(best, s);
        }
        double diff = 0.0;
        if (ti == 0) {
          base_time = best;
          base_e = e;
          base_g = g;
        } else {
          diff = std::abs(e - base_e);
          for (std::size_t k = 0; k < g.size(); ++k)
            diff = std::max(diff, std::abs(g[k] - base_g[k]));
        }
        if (diff > 1e-12)
          agree = false;
        const double speedup = base_time / best;
        csv << pr.n_qubits << ',' << thread_list[ti] << ',' << fmt(best, "%.6f") << ','
            << fmt(speedup, "%.4f") << ',' << fmt(e, "%.17g") << ',' << fmt(diff, "%.3e")
            << '\n';
        std::printf("%7d %8d %10.4f %8.3f %12.3e\n", pr.n_qubits, thread_list[ti], best,
                    speedup, diff);
        rows.push_back({{"qubits", pr.n_qubits},
                        {"threads", thread_list[ti]},
                        {"seconds", best},
                        {"speedup", speedup},
                        {"max_abs_diff", diff}});
      }
    }
    const fs::path dir(run.out);
    write_atomic(dir / "bench.csv", csv.str());
    json summary;
    summary["command"] = "bench-threads";
    summary["config"] = resolved_config(app);
    summary["hardware_threads"] = std::thread::hardware_concurrency();
    summary["rows"] = rows;
    summary["cross_thread_agreement"] = agree;
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
    if (!agree)
      throw NumericalError("results differ across thread counts by more than 1e-12");
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// export-hamiltonian

struct ExportCmd {
  SystemOpts sys;
  std::string output;
  RunOpts run;

  void attach(CLI::App *app) {
    add_common(app, run, ".");
    add_system(app, sys);
    app->add_option("--output", output, "Destination Pauli-sum file")->required();
  }

  int operator()(const CLI::App *) {
    const auto h = load_hamiltonian(sys, nullptr);
    const auto text = read_text([&](char *buf, size_t cap, size_t *n) {
      return vqm_pauli_sum_format(h.get(), buf, cap, n);
    });
    write_atomic(output, text);
    size_t terms = 0;
    check(vqm_pauli_sum_num_terms(h.get(), &terms));
    std::printf("wrote %zu term(s) to %s\n", terms, output.c_str());
    return kExitOk;
  }
};

/// Fills options not given on the command line (or by environment) from the
/// JSON config file. Unknown keys are an error.
void apply_config(CLI::App *app, const std::string &path) {
  if (path.empty())
    return;
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read config file " + path);
  for (const auto &item : JsonConfig().from_config(in)) {
    CLI::Option *opt = app->get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config" || item.name == "help")
      throw UsageError("unknown config key '" + item.name + "' in " + path);
    if (opt->count() > 0)
      continue;
    opt->clear();
    for (const auto &v : item.inputs)
      opt->add_result(v);
    opt->run_callback();
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Variational quantum eigensolver experiments"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  VqeCmd vqe;
  LrScanCmd scan;
  VqdCmd vqd;
  MetaTrainCmd mtrain;
  MetaEvalCmd meval;
  ChemCmd chem;
  BenchCmd bench;
  ExportCmd exporter;

  auto *c_vqe = app.add_subcommand("vqe", "Ground-state VQE over seeds");
  auto *c_scan = app.add_subcommand("lr-scan", "Learning-rate scan");
  auto *c_vqd = app.add_subcommand("vqd", "First excited state by deflation");
  auto *c_mtrain = app.add_subcommand("meta-train", "Train the meta-initializer");
  auto *c_meval = app.add_subcommand("meta-eval", "Meta versus random initialization");
  auto *c_chem = app.add_subcommand("chem", "VQE on a Pauli-sum or FCIDUMP file");
  auto *c_bench = app.add_subcommand("bench-threads", "Thread-scaling benchmark");
  auto *c_export = app.add_subcommand("export-hamiltonian", "Write a Hamiltonian file");
  vqe.attach(c_vqe);
  scan.attach(c_scan);
  vqd.attach(c_vqd);
  mtrain.attach(c_mtrain);
  meval.attach(c_meval);
  chem.attach(c_chem);
  bench.attach(c_bench);
  exporter.attach(c_export);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (CLI::App *sub : app.get_subcommands()) {
      const CLI::Option *cfg = sub->get_option_no_throw("--config");
      if (cfg != nullptr && cfg->count() > 0)
        apply_config(sub, cfg->as<std::string>());
    }
  } catch (const CLI::Error &e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return kExitUsage;
  } catch (const UsageError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }

  try {
    if (c_vqe->parsed())
      return vqe(c_vqe);
    if (c_scan->parsed())
      return scan(c_scan);
    if (c_vqd->parsed())
      return vqd(c_vqd);
    if (c_mtrain->parsed())
      return mtrain(c_mtrain);
    if (c_meval->parsed())
      return meval(c_meval);
    if (c_chem->parsed())
      return chem(c_chem);
    if (c_bench->parsed())
      return bench(c_bench);
    if (c_export->parsed())
      return exporter(c_export);
  } catch (const ApiError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.status());
  } catch (const UsageError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const NumericalError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const IoError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const fs::filesystem_error &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
