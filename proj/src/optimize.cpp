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

#include "vqm/optimize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace vqm {

const char *to_string(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "sgd";
}

const char *to_string(InitKind kind) {
  switch (kind) {
  case InitKind::Zero:
    return "zero";
  case InitKind::Random:
    return "random";
  case InitKind::Meta:
    return "meta";
  }
  return "?";
}

void OptimizerConfig::validate() const {
  require(learning_rate > 0.0 && std::isfinite(learning_rate), ErrorKind::Argument,
          "learning rate must be positive");
  require(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0,
          ErrorKind::Argument, "Adam betas must lie in (0, 1)");
  require(epsilon > 0.0, ErrorKind::Argument, "Adam epsilon must be positive");
  require(max_iterations >= 1, ErrorKind::Argument, "max_iterations must be >= 1");
  require(tolerance > 0.0, ErrorKind::Argument, "tolerance must be positive");
  require(theta_stride >= 0, ErrorKind::Argument, "theta_stride must be >= 0");
}

std::pair<AdamState, std::vector<double>> adam_step(AdamState state,
                                                    std::vector<double> theta,
                                                    std::span<const double> grad,
                                                    const OptimizerConfig &cfg) {
  require(grad.size() == theta.size(), ErrorKind::Shape,
          "gradient and parameter lengths differ");
  if (state.m.empty() && state.v.empty()) {
    state.m.assign(theta.size(), 0.0);
    state.v.assign(theta.size(), 0.0);
  }
  require(state.m.size() == theta.size() && state.v.size() == theta.size(),
          ErrorKind::Shape, "Adam moments do not match the parameter length");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    theta[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
  return {std::move(state), std::move(theta)};
}

std::vector<double> sgd_step(std::vector<double> theta, std::span<const double> grad,
                             const OptimizerConfig &cfg) {
  require(grad.size() == theta.size(), ErrorKind::Shape,
          "gradient and parameter lengths differ");
  for (std::size_t i = 0; i < theta.size(); ++i)
    theta[i] -= cfg.learning_rate * grad[i];
  return theta;
}

std::vector<double> initial_parameters(InitKind kind, std::size_t n,
                                       std::uint64_t seed, double scale) {
  std::vector<double> theta(n, 0.0);
  if (kind == InitKind::Random) {
    require(scale > 0.0, ErrorKind::Argument, "random init scale must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-scale * std::numbers::pi,
                                                scale * std::numbers::pi);
    for (auto &t : theta)
      t = dist(rng);
  } else {
    require(kind == InitKind::Zero, ErrorKind::Argument,
            "meta initialization is produced by the meta-learner");
  }
  return theta;
}

// ---------------------------------------------------------------------------
// Run records

std::string RunRecord::to_csv() const {
  std::ostringstream out;
  out << "iter,energy,overlap_sq,wall_ms\n";
  char buf[128];
  for (std::size_t t = 0; t < energies.size(); ++t) {
    if (overlaps.empty())
      std::snprintf(buf, sizeof buf, "%zu,%.17g,,%.3f\n", t, energies[t], wall_ms[t]);
    else
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.3f\n", t, energies[t],
                    overlaps[t], wall_ms[t]);
    out << buf;
  }
  return out.str();
}

std::string RunRecord::summary_json() const {
  nlohmann::ordered_json j;
  j["final_energy"] = final_energy;
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["seed"] = seed;
  j["init"] = to_string(init_kind);
  j["wall_time_s"] = wall_time;
  j["optimizer"] = {{"kind", to_string(config.kind)},
                    {"learning_rate", config.learning_rate},
                    {"beta1", config.beta1},
                    {"beta2", config.beta2},
                    {"epsilon", config.epsilon},
                    {"max_iterations", config.max_iterations},
                    {"tolerance", config.tolerance},
                    {"theta_stride", config.theta_stride}};
  if (beta) {
    j["beta"] = *beta;
    j["final_overlap_sq"] = final_overlap;
  }
  j["final_theta"] = final_theta;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Variational loops

namespace {

struct Evaluation {
  double energy;
  double overlap;
  double objective;
};

class Loop {
public:
  Loop(const PauliSum &h, const AnsatzProgram &a, const OptimizerConfig &cfg,
       const VqdConfig *vqd, const Simulator &sim)
      : h_(h), a_(a), cfg_(cfg), vqd_(vqd), sim_(sim) {
    cfg.validate();
    if (h.num_qubits() != a.num_qubits())
      fail(ErrorKind::Shape, "Hamiltonian acts on " + std::to_string(h.num_qubits()) +
                                 " qubits, ansatz on " + std::to_string(a.num_qubits()));
    if (vqd_ != nullptr) {
      require(vqd_->beta >= 0.0 && std::isfinite(vqd_->beta), ErrorKind::Argument,
              "VQD penalty weight must be non-negative");
      require(!vqd_->references.empty(), ErrorKind::Argument,
              "VQD needs at least one reference state");
      const auto &refs = vqd_->references;
      for (const auto &r : refs)
        require(r.num_qubits() == a.num_qubits(), ErrorKind::Shape,
                "VQD reference size differs from the ansatz");
      for (std::size_t i = 0; i < refs.size(); ++i)
        for (std::size_t j = i + 1; j < refs.size(); ++j)
          require(sim.overlap_sq(refs[i], refs[j]) <= 1e-4, ErrorKind::Validation,
                  "VQD reference states are not mutually orthogonal");
    }
  }

  double penalty(const StateVector &s) const {
    double total = 0.0;
    for (const auto &r : vqd_->references)
      total += sim_.overlap_sq(r, s);
    return total;
  }

  Evaluation evaluate(std::span<const double> theta) const {
    const auto s = run_ansatz(a_, theta, sim_);
    const double e = sim_.expectation(h_, s);
    if (vqd_ == nullptr)
      return {e, 0.0, e};
    const double ov = penalty(s);
    return {e, ov, e + vqd_->beta * ov};
  }

  std::vector<double> gradient(std::span<const double> theta) const {
    if (vqd_ == nullptr)
      return parameter_shift_gradient(a_, h_, theta, sim_);
    const double beta = vqd_->beta;
    return parameter_shift_gradient(
        a_,
        [&](const StateVector &s) { return sim_.expectation(h_, s) + beta * penalty(s); },
        theta, sim_);
  }

  RunRecord run(std::span<const double> theta0) const {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed_ms = [&] {
      return std::chrono::duration<double, std::milli>(clock::now() - start).count();
    };

    if (theta0.size() != static_cast<std::size_t>(a_.num_params()))
      fail(ErrorKind::Shape, "initial parameters have length " +
                                 std::to_string(theta0.size()) + ", ansatz expects " +
                                 std::to_string(a_.num_params()));

    RunRecord rec;
    rec.config = cfg_;
    if (vqd_ != nullptr)
      rec.beta = vqd_->beta;
    std::vector<double> theta(theta0.begin(), theta0.end());
    AdamState adam;

    auto record = [&](int iter, const Evaluation &ev) {
      rec.energies.push_back(ev.energy);
      rec.objectives.push_back(ev.objective);
      if (vqd_ != nullptr)
        rec.overlaps.push_back(ev.overlap);
      rec.wall_ms.push_back(elapsed_ms());
      if (cfg_.theta_stride > 0 && iter % cfg_.theta_stride == 0) {
        rec.theta_iterations.push_back(iter);
        rec.theta_trace.push_back(theta);
      }
    };
    auto finish = [&](const Evaluation &ev) {
      rec.final_theta = theta;
      rec.final_energy = ev.energy;
      rec.final_overlap = ev.overlap;
      rec.wall_time = elapsed_ms() / 1000.0;
      if (cfg_.theta_stride > 0 &&
          (rec.theta_iterations.empty() || rec.theta_iterations.back() != rec.iterations)) {
        rec.theta_iterations.push_back(rec.iterations);
        rec.theta_trace.push_back(theta);
      }
    };
    auto check_finite = [&](double v, const char *what, const Evaluation &last) {
      if (!std::isfinite(v)) {
        finish(last);
        throw NumericalFailure(std::string("non-finite ") + what + " at iteration " +
                                   std::to_string(rec.iterations + 1),
                               rec);
      }
    };

    auto check_theta = [&](const Evaluation &last) {
      for (double t : theta)
        check_finite(t, "parameter", last);
    };

    check_theta({});
    Evaluation prev = evaluate(theta);
    check_finite(prev.objective, "initial energy", prev);
    record(0, prev);

    for (int it = 1; it <= cfg_.max_iterations; ++it) {
      const auto grad = gradient(theta);
      for (double g : grad)
        check_finite(g, "gradient", prev);
      if (cfg_.kind == OptimizerKind::Adam)
        std::tie(adam, theta) = adam_step(std::move(adam), std::move(theta), grad, cfg_);
      else
        theta = sgd_step(std::move(theta), grad, cfg_);
      check_theta(prev);
      const Evaluation cur = evaluate(theta);
      check_finite(cur.objective, "energy", prev);
      rec.iterations = it;
      record(it, cur);
      const double change = std::abs(cur.objective - prev.objective);
      prev = cur;
      if (change < cfg_.tolerance) {
        rec.converged = true;
        break;
      }
    }
    finish(prev);
    return rec;
  }

private:
  const PauliSum &h_;
  const AnsatzProgram &a_;
  const OptimizerConfig &cfg_;
  const VqdConfig *vqd_;
  const Simulator &sim_;
};

} // namespace

RunRecord run_vqe(const PauliSum &h, const AnsatzProgram &a,
                  std::span<const double> theta0, const OptimizerConfig &cfg,
                  const Simulator &sim) {
  return Loop(h, a, cfg, nullptr, sim).run(theta0);
}

RunRecord run_vqd(const PauliSum &h, const AnsatzProgram &a,
                  std::span<const double> theta0, const OptimizerConfig &cfg,
                  const VqdConfig &vqd, const Simulator &sim) {
  return Loop(h, a, cfg, &vqd, sim).run(theta0);
}

} // namespace vqm
