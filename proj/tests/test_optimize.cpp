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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <json.hpp>

#include "support.hpp"
#include "vqm/exactdiag.hpp"
#include "vqm/hamiltonians.hpp"
#include "vqm/optimize.hpp"

using namespace vqm;
using namespace testing_support;

TEST(Adam, HandTracedSteps) {
  OptimizerConfig cfg;
  cfg.learning_rate = 0.1;
  const std::vector<double> g1{2.0, -0.5};
  auto [s1, t1] = adam_step({}, {1.0, 1.0}, g1, cfg);
  // Step 1: m_hat = g, v_hat = g^2, so each parameter moves by lr * sign(g).
  EXPECT_NEAR(t1[0], 1.0 - 0.1 * 2.0 / (2.0 + 1e-8), 1e-15);
  EXPECT_NEAR(t1[1], 1.0 + 0.1 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_EQ(s1.step, 1);

  const std::vector<double> g2{-1.0, 0.0};
  auto [s2, t2] = adam_step(s1, t1, g2, cfg);
  const double m = 0.9 * 0.2 + 0.1 * -1.0;
  const double v = 0.999 * 0.004 + 0.001 * 1.0;
  const double m_hat = m / (1 - 0.81), v_hat = v / (1 - 0.998001);
  EXPECT_NEAR(t2[0], t1[0] - 0.1 * m_hat / (std::sqrt(v_hat) + 1e-8), 1e-14);
  EXPECT_NEAR(s2.m[0], m, 1e-15);
  EXPECT_NEAR(s2.v[0], v, 1e-15);

  EXPECT_EQ(kind_of([&] { adam_step({}, {1.0}, g1, cfg); }), ErrorKind::Shape);
}

TEST(Sgd, Step) {
  OptimizerConfig cfg;
  cfg.learning_rate = 0.5;
  const std::vector<double> g{1.0, -2.0};
  EXPECT_EQ(sgd_step({0.0, 0.0}, g, cfg), (std::vector<double>{-0.5, 1.0}));
}

TEST(OptimizerConfig, Validation) {
  auto bad = [](auto edit) {
    OptimizerConfig c;
    edit(c);
    return kind_of([&] { c.validate(); });
  };
  EXPECT_EQ(bad([](OptimizerConfig &c) { c.learning_rate = 0.0; }), ErrorKind::Argument);
  EXPECT_EQ(bad([](OptimizerConfig &c) { c.beta1 = 1.0; }), ErrorKind::Argument);
  EXPECT_EQ(bad([](OptimizerConfig &c) { c.epsilon = 0.0; }), ErrorKind::Argument);
  EXPECT_EQ(bad([](OptimizerConfig &c) { c.max_iterations = 0; }), ErrorKind::Argument);
  EXPECT_EQ(bad([](OptimizerConfig &c) { c.tolerance = -1.0; }), ErrorKind::Argument);
  EXPECT_NO_THROW(OptimizerConfig{}.validate());
}

TEST(InitialParameters, ZeroAndSeededRandom) {
  EXPECT_EQ(initial_parameters(InitKind::Zero, 3, 9), std::vector<double>(3, 0.0));
  const auto a = initial_parameters(InitKind::Random, 200, 1);
  const auto b = initial_parameters(InitKind::Random, 200, 1);
  const auto c = initial_parameters(InitKind::Random, 200, 2);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  double lo = 0.0, hi = 0.0;
  for (double t : a) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  EXPECT_GE(lo, -std::numbers::pi);
  EXPECT_LE(hi, std::numbers::pi);
  EXPECT_LT(lo, -2.5);
  EXPECT_GT(hi, 2.5);
  for (double t : initial_parameters(InitKind::Random, 50, 3, 0.01))
    EXPECT_LE(std::abs(t), 0.01 * std::numbers::pi);
  EXPECT_EQ(kind_of([] { initial_parameters(InitKind::Meta, 2, 0); }), ErrorKind::Argument);
}

TEST(Vqe, ZeroInitOnOscillatorStartsAtGroundEnergy) {
  const PauliSum h = build_sho({0.5, 4});
  const AnsatzProgram a = build_hea(4, 5);
  const RunRecord r = run_vqe(h, a, std::vector<double>(40, 0.0), OptimizerConfig{});
  EXPECT_EQ(r.energies.front(), 0.25);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

TEST(Vqe, SingleQubitConvergesAndRecordsTrace) {
  const PauliSum h(1, {{1.0, PauliString::parse("Z")}, {0.5, PauliString::parse("X")}});
  const AnsatzProgram a = build_hea(1, 1);
  OptimizerConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.tolerance = 1e-12;
  cfg.max_iterations = 3000;
  cfg.theta_stride = 10;
  const RunRecord r = run_vqe(h, a, std::vector<double>{1.0, 0.3}, cfg);
  const double exact = -std::sqrt(1.25);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.final_energy, exact, 1e-8);
  EXPECT_GE(r.final_energy, exact - 1e-9);
  EXPECT_EQ(r.energies.size(), static_cast<std::size_t>(r.iterations) + 1);
  EXPECT_EQ(r.wall_ms.size(), r.energies.size());
  EXPECT_TRUE(r.overlaps.empty());
  EXPECT_EQ(r.theta_iterations.front(), 0);
  EXPECT_EQ(r.theta_iterations.back(), r.iterations);
  EXPECT_EQ(r.theta_trace.back(), r.final_theta);

  const std::string csv = r.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iter,energy,overlap_sq,wall_ms");
  const auto j = nlohmann::json::parse(r.summary_json());
  EXPECT_EQ(j["iterations"], r.iterations);
  EXPECT_EQ(j["optimizer"]["kind"], "adam");
  EXPECT_DOUBLE_EQ(j["optimizer"]["beta2"].get<double>(), 0.999);
  EXPECT_FALSE(j.contains("beta"));
}

TEST(Vqe, TraceIndependentOfThreadCount) {
  const PauliSum h = build_sho({0.5, 3});
  const AnsatzProgram a = build_hea(3, 2);
  OptimizerConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.max_iterations = 30;
  const auto theta0 = initial_parameters(InitKind::Random, a.num_params(), 4);
  const RunRecord r1 = run_vqe(h, a, theta0, cfg, Simulator(1));
  const RunRecord r3 = run_vqe(h, a, theta0, cfg, Simulator(3));
  EXPECT_EQ(r1.energies, r3.energies);
  EXPECT_EQ(r1.final_theta, r3.final_theta);
}

TEST(Vqe, NonFiniteParametersReportPartialTrace) {
  const PauliSum h(1, {{1.0, PauliString::parse("Z")}});
  const AnsatzProgram a = build_hea(1, 1);
  try {
    run_vqe(h, a, std::vector<double>{std::numeric_limits<double>::quiet_NaN(), 0.0},
            OptimizerConfig{});
    FAIL();
  } catch (const NumericalFailure &e) {
    EXPECT_EQ(e.kind(), ErrorKind::Numerical);
    EXPECT_TRUE(e.partial().energies.empty());
  }
  EXPECT_EQ(kind_of([&] { run_vqe(h, a, std::vector<double>{0.0}, OptimizerConfig{}); }),
            ErrorKind::Shape);
}

TEST(Vqe, NeverBeatsExactGroundEnergy) {
  std::mt19937_64 rng(51);
  OptimizerConfig cfg;
  cfg.learning_rate = 5e-2;
  cfg.max_iterations = 150;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 3;
    const PauliSum h = random_pauli_sum(n, 8, rng);
    const AnsatzProgram a = build_hea(n, 2);
    const RunRecord r =
        run_vqe(h, a, initial_parameters(InitKind::Random, a.num_params(), trial), cfg);
    const double e0 = ground_energy(h);
    for (double e : r.energies)
      EXPECT_GE(e, e0 - 1e-9);
  }
}

TEST(Vqd, ZeroPenaltyReproducesVqe) {
  const PauliSum h = build_sho({0.5, 2});
  const AnsatzProgram a = build_hea(2, 2);
  OptimizerConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.max_iterations = 40;
  const auto theta0 = initial_parameters(InitKind::Random, a.num_params(), 6);
  const RunRecord vqe = run_vqe(h, a, theta0, cfg);
  const RunRecord vqd = run_vqd(h, a, theta0, cfg, {0.0, {StateVector::zero(2)}});
  EXPECT_EQ(vqe.energies, vqd.energies);
  EXPECT_EQ(vqe.final_theta, vqd.final_theta);
  ASSERT_TRUE(vqd.beta.has_value());
  EXPECT_EQ(*vqd.beta, 0.0);
}

TEST(Vqd, DeflationFindsFirstExcitedLevel) {
  const double omega = 0.5;
  const PauliSum h = build_sho({omega, 2});
  const AnsatzProgram a = build_hea(2, 2);
  OptimizerConfig cfg;
  cfg.learning_rate = 2e-2;
  cfg.tolerance = 1e-11;
  cfg.max_iterations = 5000;
  const VqdConfig vqd{VqdConfig::default_beta(omega), {StateVector::zero(2)}};
  const RunRecord r =
      run_vqd(h, a, initial_parameters(InitKind::Random, a.num_params(), 3), cfg, vqd);
  const auto ev = eigenvalues(h);
  EXPECT_NEAR(r.final_energy, ev[1], 1e-5);
  EXPECT_LT(std::abs(r.final_energy - ev[1]), std::abs(r.final_energy - ev[0]));
  EXPECT_LE(r.final_overlap, 1e-6);
  EXPECT_EQ(r.overlaps.size(), r.energies.size());
  // Objective adds the penalty to the bare energy.
  for (std::size_t t = 0; t < r.energies.size(); t += 97)
    EXPECT_NEAR(r.objectives[t], r.energies[t] + vqd.beta * r.overlaps[t], 1e-12);
  const auto j = nlohmann::json::parse(r.summary_json());
  EXPECT_DOUBLE_EQ(j["beta"].get<double>(), 5.0);
}

TEST(Vqd, ConfigErrors) {
  const PauliSum h = build_sho({0.5, 2});
  const AnsatzProgram a = build_hea(2, 1);
  const std::vector<double> theta(4, 0.1);
  const OptimizerConfig cfg;
  EXPECT_EQ(kind_of([&] { run_vqd(h, a, theta, cfg, {1.0, {}}); }), ErrorKind::Argument);
  EXPECT_EQ(kind_of([&] { run_vqd(h, a, theta, cfg, {-1.0, {StateVector::zero(2)}}); }),
            ErrorKind::Argument);
  EXPECT_EQ(kind_of([&] {
              run_vqd(h, a, theta, cfg, {1.0, {StateVector::zero(2), StateVector::zero(2)}});
            }),
            ErrorKind::Validation);
  EXPECT_EQ(kind_of([&] { run_vqd(h, a, theta, cfg, {1.0, {StateVector::zero(3)}}); }),
            ErrorKind::Shape);
}
