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

#pragma once

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vqm/error.hpp"
#include "vqm/pauli.hpp"
#include "vqm/statevector.hpp"

namespace testing_support {

/// Kind of the vqm::Error raised by f; records a failure when none is.
inline vqm::ErrorKind kind_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const vqm::Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return vqm::ErrorKind::Argument;
}

inline oracle::Matrix to_oracle(const vqm::DenseMatrix &m) {
  oracle::Matrix out(m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c)
      out(r, c) = m(r, c);
  return out;
}

inline vqm::DenseMatrix to_dense(const oracle::Matrix &m) {
  vqm::DenseMatrix out(m.n);
  for (std::size_t r = 0; r < m.n; ++r)
    for (std::size_t c = 0; c < m.n; ++c)
      out(r, c) = m(r, c);
  return out;
}

/// Oracle matrix of a PauliSum built letter by letter with Kronecker products.
inline oracle::Matrix oracle_matrix(const vqm::PauliSum &h) {
  oracle::Matrix out(std::size_t{1} << h.num_qubits());
  for (const auto &t : h.terms())
    out = oracle::add(out, oracle::pauli(t.string.to_string()), t.coeff);
  return out;
}

inline std::vector<oracle::cplx> amplitudes(const vqm::StateVector &s) {
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

inline double max_abs_diff(std::span<const oracle::cplx> a, std::span<const oracle::cplx> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline std::string random_letters(int n, std::mt19937_64 &rng) {
  static const char kLetters[] = "IXYZ";
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s;
  for (int q = 0; q < n; ++q)
    s.push_back(kLetters[pick(rng)]);
  return s;
}

inline vqm::PauliSum random_pauli_sum(int n, int terms, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<vqm::PauliTerm> t;
  for (int k = 0; k < terms; ++k)
    t.push_back({g(rng), vqm::PauliString::parse(random_letters(n, rng))});
  return vqm::PauliSum(n, std::move(t));
}

inline std::vector<double> random_angles(std::size_t n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-3.14159, 3.14159);
  std::vector<double> out(n);
  for (auto &v : out)
    v = u(rng);
  return out;
}

} // namespace testing_support
