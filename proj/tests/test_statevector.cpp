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
#include <random>

#include "support.hpp"
#include "vqm/statevector.hpp"

using namespace vqm;
using namespace testing_support;

namespace {

StateVector random_state(int n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> amp(std::size_t{1} << n);
  double norm = 0.0;
  for (auto &a : amp) {
    a = cplx(g(rng), g(rng));
    norm += std::norm(a);
  }
  for (auto &a : amp)
    a /= std::sqrt(norm);
  return StateVector::from_amplitudes(std::move(amp));
}

bool bitwise_equal(const StateVector &a, const StateVector &b) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a[i] != b[i])
      return false;
  return true;
}

} // namespace

TEST(StateVector, BasisStates) {
  const StateVector z = StateVector::zero(3);
  EXPECT_EQ(z.dim(), 8u);
  EXPECT_EQ(z[0], cplx(1.0));
  const StateVector b = StateVector::basis(3, 5);
  EXPECT_EQ(b[5], cplx(1.0));
  EXPECT_DOUBLE_EQ(b.norm_sq(), 1.0);
  EXPECT_EQ(kind_of([] { StateVector::basis(2, 4); }), ErrorKind::Index);
  EXPECT_EQ(kind_of([] { StateVector::from_amplitudes(std::vector<cplx>(3)); }),
            ErrorKind::Shape);
  EXPECT_EQ(kind_of([] { StateVector::zero(kSimulatorQubitCap + 1); }), ErrorKind::Size);
}

TEST(Gates, MatchDenseOracle) {
  std::mt19937_64 rng(1);
  const int n = 3;
  for (int trial = 0; trial < 5; ++trial) {
    const StateVector s = random_state(n, rng);
    const auto v = amplitudes(s);
    const double t = 0.37 + trial;
    for (int q = 0; q < n; ++q) {
      EXPECT_LT(max_abs_diff(amplitudes(apply_ry(s, q, t)),
                             oracle::apply(oracle::embed(oracle::ry(t), q, n), v)),
                1e-14);
      EXPECT_LT(max_abs_diff(amplitudes(apply_rz(s, q, t)),
                             oracle::apply(oracle::embed(oracle::rz(t), q, n), v)),
                1e-14);
      StateVector x = s;
      Simulator{}.x(x, q);
      EXPECT_LT(max_abs_diff(amplitudes(x),
                             oracle::apply(oracle::embed(oracle::letter('X'), q, n), v)),
                1e-15);
      for (int r = 0; r < n; ++r) {
        if (r == q)
          continue;
        EXPECT_LT(max_abs_diff(amplitudes(apply_cnot(s, q, r)),
                               oracle::apply(oracle::cnot(q, r, n), v)),
                  1e-15);
      }
    }
    for (int k = 0; k < 8; ++k) {
      const std::string letters = random_letters(n, rng);
      const PauliString p = PauliString::parse(letters);
      EXPECT_LT(max_abs_diff(amplitudes(apply_pauli_rotation(s, p, t)),
                             oracle::apply(oracle::pauli_rotation(letters, t), v)),
                1e-14)
          << letters;
      EXPECT_LT(max_abs_diff(amplitudes(apply_pauli(p, s)),
                             oracle::apply(oracle::pauli(letters), v)),
                1e-15)
          << letters;
    }
  }
}

TEST(Gates, Involutions) {
  std::mt19937_64 rng(2);
  const StateVector s = random_state(4, rng);
  Simulator sim;
  StateVector t = s;
  sim.x(t, 2);
  sim.x(t, 2);
  EXPECT_TRUE(bitwise_equal(s, t));
  t = apply_cnot(apply_cnot(s, 1, 3), 1, 3);
  EXPECT_TRUE(bitwise_equal(s, t));
  const PauliString p = PauliString::parse("XYZY");
  EXPECT_LT(max_abs_diff(amplitudes(apply_pauli(p, apply_pauli(p, s))), amplitudes(s)),
            1e-15);
  // A full turn of exp(-i t P / 2) is -I.
  t = apply_pauli_rotation(s, p, 2 * M_PI);
  for (std::size_t i = 0; i < s.dim(); ++i)
    EXPECT_NEAR(std::abs(t[i] + s[i]), 0.0, 1e-14);
}

TEST(Gates, NormPreservedOverLongRandomCircuit) {
  std::mt19937_64 rng(3);
  const int n = 6;
  Simulator sim;
  StateVector s = StateVector::zero(n);
  std::uniform_int_distribution<int> gate(0, 4), qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int g = 0; g < 1000; ++g) {
    const int q = qubit(rng);
    switch (gate(rng)) {
    case 0: sim.ry(s, q, angle(rng)); break;
    case 1: sim.rz(s, q, angle(rng)); break;
    case 2: sim.x(s, q); break;
    case 3: sim.cnot(s, q, (q + 1 + qubit(rng) % (n - 1)) % n); break;
    default: sim.pauli_rotation(s, PauliString::parse(random_letters(n, rng)), angle(rng));
    }
  }
  EXPECT_LE(std::abs(s.norm_sq() - 1.0), 1e-10);
}

TEST(Observables, ExpectationMatchesDenseOracle) {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 5; ++n) {
    const PauliSum h = random_pauli_sum(n, 10, rng);
    const StateVector s = random_state(n, rng);
    EXPECT_NEAR(expectation(h, s), oracle::expectation(oracle_matrix(h), amplitudes(s)),
                1e-12);
  }
}

TEST(Observables, OverlapAndInner) {
  std::mt19937_64 rng(5);
  const StateVector a = random_state(3, rng);
  const StateVector b = random_state(3, rng);
  cplx ip = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    ip += std::conj(a[i]) * b[i];
  EXPECT_LT(std::abs(Simulator{}.inner(a, b) - ip), 1e-15);
  EXPECT_NEAR(overlap_sq(a, b), std::norm(ip), 1e-15);
  EXPECT_NEAR(overlap_sq(a, a), 1.0, 1e-14);
  EXPECT_NEAR(overlap_sq(StateVector::basis(3, 1), StateVector::basis(3, 2)), 0.0, 0.0);
}

TEST(Observables, RejectMismatchedOrUnnormalizedStates) {
  const PauliSum h(2, {{1.0, PauliString::parse("ZZ")}});
  EXPECT_EQ(kind_of([&] { expectation(h, StateVector::zero(3)); }), ErrorKind::Shape);
  const StateVector bad = StateVector::from_amplitudes({2.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(kind_of([&] { expectation(h, bad); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([&] { overlap_sq(bad, StateVector::zero(2)); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { apply_ry(StateVector::zero(2), 2, 0.1); }), ErrorKind::Index);
  EXPECT_EQ(kind_of([] { apply_cnot(StateVector::zero(2), 1, 1); }), ErrorKind::Argument);
  EXPECT_EQ(kind_of([] { Simulator(0); }), ErrorKind::Argument);
}

TEST(Simulator, ResultsIndependentOfThreadCount) {
  std::mt19937_64 rng(6);
  const int n = 14;
  const StateVector s0 = random_state(n, rng);
  const PauliSum h = random_pauli_sum(n, 20, rng);
  const PauliString p = PauliString::parse(random_letters(n, rng));
  Simulator one(1), four(4);
  StateVector a = s0, b = s0;
  for (Simulator *sim : {&one, &four}) {
    StateVector &s = sim == &one ? a : b;
    sim->ry(s, 3, 0.7);
    sim->rz(s, 13, -1.1);
    sim->cnot(s, 13, 0);
    sim->x(s, 7);
    sim->pauli_rotation(s, p, 0.4);
  }
  EXPECT_TRUE(bitwise_equal(a, b));
  EXPECT_EQ(one.expectation(h, a), four.expectation(h, a));
  EXPECT_EQ(one.overlap_sq(a, s0), four.overlap_sq(a, s0));
}
