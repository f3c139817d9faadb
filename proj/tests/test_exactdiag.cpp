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

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"
#include "vqm/exactdiag.hpp"
#include "vqm/hamiltonians.hpp"

using namespace vqm;
using namespace testing_support;

TEST(EigenHermitian, ReconstructsRandomMatrix) {
  std::mt19937_64 rng(21);
  const std::size_t dim = 64;
  const auto m = oracle::random_hermitian(dim, rng);
  const Spectrum sp = eigen_hermitian(to_dense(m));
  ASSERT_EQ(sp.eigenvalues.size(), dim);
  ASSERT_TRUE(sp.has_vectors());
  EXPECT_TRUE(std::is_sorted(sp.eigenvalues.begin(), sp.eigenvalues.end()));

  double mmax = 0.0;
  for (auto v : m.a)
    mmax = std::max(mmax, std::abs(v));
  const auto &v = sp.eigenvectors;
  for (std::size_t j = 0; j < dim; ++j) {
    double residual = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      cplx mv = 0.0;
      for (std::size_t c = 0; c < dim; ++c)
        mv += m(r, c) * v(c, j);
      residual = std::max(residual, std::abs(mv - sp.eigenvalues[j] * v(r, j)));
    }
    EXPECT_LE(residual, 1e-8 * mmax) << "pair " << j;
    for (std::size_t k = 0; k <= j; ++k) {
      cplx ip = 0.0;
      for (std::size_t r = 0; r < dim; ++r)
        ip += std::conj(v(r, k)) * v(r, j);
      EXPECT_NEAR(std::abs(ip - (k == j ? 1.0 : 0.0)), 0.0, 1e-8);
    }
  }
}

TEST(EigenHermitian, TraceInvariants) {
  std::mt19937_64 rng(22);
  for (std::size_t dim : {1u, 2u, 5u, 16u, 33u}) {
    const auto m = oracle::random_hermitian(dim, rng);
    const auto ev = eigen_hermitian(to_dense(m), false).eigenvalues;
    double tr = 0.0, tr2 = 0.0, s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      tr += m(i, i).real();
      for (std::size_t j = 0; j < dim; ++j)
        tr2 += std::norm(m(i, j));
      s += ev[i];
      s2 += ev[i] * ev[i];
    }
    EXPECT_NEAR(s, tr, 1e-10 * dim);
    EXPECT_NEAR(s2, tr2, 1e-9 * tr2);
  }
}

TEST(EigenHermitian, KnownSpectra) {
  const auto ev = eigenvalues(PauliSum(1, {{1.0, PauliString::parse("X")},
                                           {1.0, PauliString::parse("Z")}}));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(ev[1], std::sqrt(2.0), 1e-14);

  // Heisenberg pair: XX + YY + ZZ has a singlet at -3 and a triplet at 1.
  const auto heis = eigenvalues(PauliSum(2, {{1.0, PauliString::parse("XX")},
                                             {1.0, PauliString::parse("YY")},
                                             {1.0, PauliString::parse("ZZ")}}));
  EXPECT_NEAR(heis[0], -3.0, 1e-13);
  for (int k = 1; k < 4; ++k)
    EXPECT_NEAR(heis[k], 1.0, 1e-13);
}

TEST(GroundEnergy, DiagonalSumsUseDiagonalMinimum) {
  const PauliSum h(3, {{0.5, PauliString::parse("ZII")},
                       {-0.25, PauliString::parse("ZZI")},
                       {1.0, PauliString::parse("IIZ")},
                       {0.1, PauliString::parse("III")}});
  const auto m = oracle_matrix(h);
  double lo = 1e300;
  for (std::size_t i = 0; i < m.n; ++i)
    lo = std::min(lo, m(i, i).real());
  EXPECT_NEAR(ground_energy(h), lo, 1e-15);
}

TEST(GroundEnergy, OscillatorBeyondDenseCap) {
  EXPECT_NEAR(ground_energy(build_sho({0.3, 16})), 0.15, 1e-9);
}

TEST(EigenHermitian, Errors) {
  EXPECT_EQ(kind_of([] { eigen_hermitian(DenseMatrix()); }), ErrorKind::Shape);
  DenseMatrix m(2);
  m(0, 1) = 1.0;
  EXPECT_EQ(kind_of([&] { eigen_hermitian(m); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { ground_energy(PauliSum(13, {{1.0, PauliString::single(13, 0, 'X')}})); }),
            ErrorKind::Size);
}
