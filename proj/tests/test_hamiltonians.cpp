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

#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vqm/exactdiag.hpp"
#include "vqm/fermion.hpp"
#include "vqm/hamiltonians.hpp"

using namespace vqm;
using namespace testing_support;

namespace {

/// Spatial-orbital integrals held by the test with their own symmetry
/// completion.
struct Spatial {
  int norb;
  double core = 0.0;
  std::vector<double> h1;
  std::vector<double> h2; // chemist (pq|rs)

  explicit Spatial(int n) : norb(n), h1(n * n), h2(n * n * n * n) {}
  double &one(int p, int q) { return h1[p * norb + q]; }
  double &two(int p, int q, int r, int s) { return h2[((p * norb + q) * norb + r) * norb + s]; }

  static Spatial random(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 0.3);
    Spatial s(n);
    s.core = g(rng);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q <= p; ++q)
        s.one(p, q) = s.one(q, p) = g(rng);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int t = 0; t < n; ++t) {
            if (s.two(p, q, r, t) != 0.0)
              continue;
            const double v = g(rng);
            for (auto [a, b, c, d] : {std::array{p, q, r, t}, std::array{q, p, r, t},
                                      std::array{p, q, t, r}, std::array{q, p, t, r},
                                      std::array{r, t, p, q}, std::array{t, r, p, q},
                                      std::array{r, t, q, p}, std::array{t, r, q, p}})
              s.two(a, b, c, d) = v;
          }
    return s;
  }

  std::string fcidump(int nelec, bool physicist) {
    std::ostringstream out;
    out.precision(17);
    out << "&FCI NORB=" << norb << ",NELEC=" << nelec << ",\n&END\n";
    for (int p = 0; p < norb; ++p)
      for (int q = 0; q < norb; ++q)
        for (int r = 0; r < norb; ++r)
          for (int s = 0; s < norb; ++s) {
            // Physicist <pq|rs> = (pr|qs).
            const double v = physicist ? two(p, r, q, s) : two(p, q, r, s);
            out << v << ' ' << p + 1 << ' ' << q + 1 << ' ' << r + 1 << ' ' << s + 1 << '\n';
          }
    for (int p = 0; p < norb; ++p)
      for (int q = 0; q <= p; ++q)
        out << one(p, q) << ' ' << p + 1 << ' ' << q + 1 << " 0 0\n";
    out << core << " 0 0 0 0\n";
    return out.str();
  }

  /// E_core + sum h_pq a+_p a_q + 1/2 sum (pq|rs) a+_p a+_r a_s a_q over
  /// interleaved spin-orbitals, built in the occupation-number basis.
  oracle::Matrix fock_hamiltonian() {
    const int n = 2 * norb;
    const oracle::Fock fock{n};
    oracle::Matrix h = oracle::Matrix::identity(std::size_t{1} << n);
    for (auto &v : h.a)
      v *= core;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (p % 2 == q % 2 && one(p / 2, q / 2) != 0.0)
          h = oracle::add(h, fock.product({{p, true}, {q, false}}), one(p / 2, q / 2));
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            if (p % 2 != q % 2 || r % 2 != s % 2)
              continue;
            const double v = two(p / 2, q / 2, r / 2, s / 2);
            if (v != 0.0)
              h = oracle::add(h, fock.product({{p, true}, {r, true}, {s, false}, {q, false}}),
                              0.5 * v);
          }
    return h;
  }
};

Spatial h2_sto3g() {
  Spatial s(2);
  s.core = 0.71375399;
  s.one(0, 0) = -1.25246357;
  s.one(1, 1) = -0.47594871;
  s.two(0, 0, 0, 0) = 0.67449314;
  s.two(1, 1, 1, 1) = 0.69739794;
  s.two(0, 0, 1, 1) = s.two(1, 1, 0, 0) = 0.66347211;
  s.two(0, 1, 0, 1) = s.two(1, 0, 1, 0) = s.two(0, 1, 1, 0) = s.two(1, 0, 0, 1) = 0.18128754;
  return s;
}

std::filesystem::path data_file(const std::string &name) {
  return std::filesystem::path(VQM_DATA_DIR) / name;
}

} // namespace

TEST(Oscillator, NumberDiagonalFromLadderMatrices) {
  const std::size_t levels = 16;
  oracle::Matrix a(levels);
  for (std::size_t j = 1; j < levels; ++j)
    a(j - 1, j) = std::sqrt(static_cast<double>(j));
  const auto n_op = oracle::matmul(oracle::adjoint(a), a);
  const auto d = sho_number_diagonal(levels);
  for (std::size_t j = 0; j < levels; ++j)
    EXPECT_NEAR(d[j], n_op(j, j).real(), 1e-14);
}

TEST(Oscillator, SpectrumIsEquallySpaced) {
  for (int n = 1; n <= 4; ++n) {
    const double omega = 0.5;
    const PauliSum h = build_sho({omega, n});
    for (const auto &t : h.terms())
      EXPECT_TRUE(t.string.is_diagonal());
    const auto m = oracle_matrix(h);
    for (std::size_t j = 0; j < m.n; ++j)
      EXPECT_NEAR(m(j, j).real(), omega * (j + 0.5), 1e-13);
    const auto ev = eigenvalues(h);
    EXPECT_NEAR(ev[0], 0.25, 1e-13);
    if (n > 1)
      EXPECT_NEAR(ev[1], 0.75, 1e-13);
  }
}

TEST(Oscillator, IdentityCoefficientIsMeanLevel) {
  const PauliSum h = build_sho({0.7, 3});
  EXPECT_NEAR(h.coefficient(PauliString(3)), 0.7 * (3.5 + 0.5), 1e-14);
  EXPECT_EQ(kind_of([] { build_sho({-1.0, 2}); }), ErrorKind::Argument);
  EXPECT_EQ(kind_of([] { build_sho({1.0, 0}); }), ErrorKind::Size);
}

TEST(JordanWigner, LadderMatricesMatchOccupationAlgebra) {
  const int n = 3;
  const oracle::Fock fock{n};
  for (int p = 0; p < n; ++p)
    for (bool create : {true, false}) {
      oracle::Matrix m(8);
      for (const auto &[c, s] : jordan_wigner_ladder(n, {p, create}))
        m = oracle::add(m, oracle::pauli(s.to_string()), c);
      EXPECT_LT(oracle::max_abs_diff(m, fock.product({{p, create}})), 1e-15);
    }
}

TEST(JordanWigner, NumberOperatorIsHalfIMinusZ) {
  const int n = 3;
  for (int p = 0; p < n; ++p) {
    ComplexPauliSum s(n);
    const std::array<LadderOp, 2> ops{{{p, true}, {p, false}}};
    s.add_ladder_product(1.0, ops);
    const PauliSum h = s.to_real();
    ASSERT_EQ(h.size(), 2u);
    EXPECT_DOUBLE_EQ(h.coefficient(PauliString(n)), 0.5);
    EXPECT_DOUBLE_EQ(h.coefficient(PauliString::single(n, p, 'Z')), -0.5);
  }
}

TEST(JordanWigner, HoppingIsHalfXXPlusYY) {
  ComplexPauliSum s(2);
  const std::array<LadderOp, 2> pq{{{0, true}, {1, false}}};
  const std::array<LadderOp, 2> qp{{{1, true}, {0, false}}};
  s.add_ladder_product(1.0, pq);
  s.add_ladder_product(1.0, qp);
  const PauliSum h = s.to_real();
  ASSERT_EQ(h.size(), 2u);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliString::parse("XX")), 0.5);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliString::parse("YY")), 0.5);

  // Non-adjacent orbitals pick up the parity string in between.
  ComplexPauliSum t(3);
  const std::array<LadderOp, 2> a{{{0, true}, {2, false}}};
  const std::array<LadderOp, 2> b{{{2, true}, {0, false}}};
  t.add_ladder_product(1.0, a);
  t.add_ladder_product(1.0, b);
  const PauliSum g = t.to_real();
  EXPECT_DOUBLE_EQ(g.coefficient(PauliString::parse("XZX")), 0.5);
  EXPECT_DOUBLE_EQ(g.coefficient(PauliString::parse("YZY")), 0.5);
}

TEST(JordanWigner, NonHermitianProductIsRejected) {
  ComplexPauliSum s(2);
  const std::array<LadderOp, 2> ops{{{0, true}, {1, false}}};
  s.add_ladder_product(1.0, ops);
  EXPECT_EQ(kind_of([&] { s.to_real(); }), ErrorKind::Validation);
}

TEST(Fcidump, H2FileMatchesOccupationOracle) {
  const FermionIntegrals f = load_fcidump(data_file("h2_sto3g.fcidump"));
  EXPECT_EQ(f.num_spin_orbitals(), 4);
  EXPECT_EQ(f.num_electrons(), 2);
  EXPECT_DOUBLE_EQ(f.core_energy(), 0.71375399);
  const PauliSum h = jordan_wigner(f);
  const auto ref = h2_sto3g().fock_hamiltonian();
  EXPECT_LT(oracle::max_abs_diff(oracle_matrix(h), ref), 1e-13);

  // Two-electron block of the oracle holds the ground state.
  const auto ev = eigen_hermitian(to_dense(ref), false).eigenvalues;
  EXPECT_NEAR(ground_energy(h), ev[0], 1e-12);
  EXPECT_LT(ground_energy(h), -1.13);
  EXPECT_GT(ground_energy(h), -1.14);
}

TEST(Fcidump, RandomIntegralsBothOrders) {
  std::mt19937_64 rng(31);
  for (int norb : {1, 2, 3}) {
    Spatial s = Spatial::random(norb, rng);
    const auto ref = s.fock_hamiltonian();
    for (bool phys : {false, true}) {
      const auto f = parse_fcidump(s.fcidump(2, phys),
                                   phys ? TwoBodyOrder::Physicist : TwoBodyOrder::Chemist);
      EXPECT_LT(f.symmetry_violation(), 1e-15);
      const PauliSum h = jordan_wigner(f);
      const auto m = oracle_matrix(h);
      EXPECT_LT(oracle::max_abs_diff(m, ref), 1e-12) << norb << " " << phys;
      EXPECT_LT(oracle::max_abs_diff(m, oracle::adjoint(m)), 1e-15);
    }
  }
}

TEST(Fcidump, CoreOnlyFile) {
  const auto f = parse_fcidump("&FCI NORB=1,NELEC=0,\n&END\n -3.5 0 0 0 0\n",
                               TwoBodyOrder::Chemist);
  const PauliSum h = jordan_wigner(f);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliString(2)), -3.5);
  EXPECT_DOUBLE_EQ(ground_energy(h), -3.5);
}

TEST(Fcidump, MalformedInputIsLocated) {
  try {
    parse_fcidump("&FCI NORB=2,NELEC=2,\n&END\n 0.5 1 1 1 1\n oops\n", TwoBodyOrder::Chemist,
                  "bad.fcidump");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("bad.fcidump"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] {
              parse_fcidump("&FCI NORB=1,NELEC=0,\n&END\n 0.5 2 1 0 0\n",
                            TwoBodyOrder::Chemist);
            }),
            ErrorKind::Parse);
  EXPECT_EQ(kind_of([] {
              parse_fcidump("&FCI NELEC=0,\n&END\n", TwoBodyOrder::Chemist);
            }),
            ErrorKind::Parse);
  EXPECT_EQ(kind_of([] {
              parse_fcidump("&FCI NORB=2,NELEC=2,\n&END\n 0.5 1 2 0 0\n 0.6 2 1 0 0\n",
                            TwoBodyOrder::Chemist);
            }),
            ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { load_fcidump("/nonexistent/x.fcidump"); }), ErrorKind::Io);
}

TEST(Files, PauliSumSaveLoadAndAtomicWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "vqm_test_files";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(5);
  const PauliSum h = random_pauli_sum(4, 9, rng);
  save_pauli_sum(h, dir / "h.txt");
  EXPECT_EQ(load_pauli_sum(dir / "h.txt"), h);
  write_file_atomic(dir / "a.txt", "first");
  write_file_atomic(dir / "a.txt", "second");
  EXPECT_EQ(read_file(dir / "a.txt"), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto &e : std::filesystem::directory_iterator(dir))
    ++entries;
  EXPECT_EQ(entries, 2u);
  std::filesystem::remove_all(dir);
  EXPECT_EQ(kind_of([] { load_pauli_sum("/nonexistent/h.txt"); }), ErrorKind::Io);
}
