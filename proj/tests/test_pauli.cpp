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

#include <random>

#include "support.hpp"
#include "vqm/error.hpp"
#include "vqm/pauli.hpp"

using namespace vqm;
using namespace testing_support;

namespace {

std::vector<std::string> all_strings(int n) {
  std::vector<std::string> out{""};
  for (int q = 0; q < n; ++q) {
    std::vector<std::string> next;
    for (const auto &s : out)
      for (char c : std::string("IXYZ"))
        next.push_back(s + c);
    out = std::move(next);
  }
  return out;
}

} // namespace

TEST(PauliString, LettersMapToMasks) {
  const PauliString p = PauliString::parse("XZYI");
  EXPECT_EQ(p.num_qubits(), 4);
  EXPECT_EQ(p.x_mask(), 0b0101u);
  EXPECT_EQ(p.z_mask(), 0b0110u);
  EXPECT_EQ(p.num_y(), 1);
  EXPECT_EQ(p.letter(0), 'X');
  EXPECT_EQ(p.letter(2), 'Y');
  EXPECT_EQ(p.to_string(), "XZYI");
  EXPECT_EQ(PauliString::single(3, 1, 'Y').to_string(), "IYI");
  EXPECT_TRUE(PauliString(5).is_identity());
  EXPECT_TRUE(PauliString::parse("ZIZ").is_diagonal());
}

TEST(PauliString, RejectsBadInput) {
  EXPECT_EQ(kind_of([] { PauliString::parse("XQ"); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { PauliString(2, 0b100, 0); }), ErrorKind::Index);
  EXPECT_EQ(kind_of([] { PauliString::single(2, 2, 'X'); }), ErrorKind::Index);
  EXPECT_EQ(kind_of([] { PauliString(0); }), ErrorKind::Size);
}

TEST(PauliMatrix, MatchesKroneckerTabulation) {
  for (int n = 1; n <= 3; ++n)
    for (const auto &s : all_strings(n)) {
      const auto m = to_oracle(pauli_matrix(PauliString::parse(s)));
      EXPECT_LT(oracle::max_abs_diff(m, oracle::pauli(s)), 1e-15) << s;
    }
}

TEST(PauliMatrix, SingleQubitLetters) {
  const cplx I(0.0, 1.0);
  const auto y = pauli_matrix(PauliString::parse("Y"));
  EXPECT_EQ(y(0, 1), -I);
  EXPECT_EQ(y(1, 0), I);
  // "XZ": X on qubit 0 flips the low bit, Z on qubit 1 signs the high bit.
  const auto xz = pauli_matrix(PauliString::parse("XZ"));
  EXPECT_EQ(xz(1, 0), cplx(1.0));
  EXPECT_EQ(xz(3, 2), cplx(-1.0));
}

TEST(PauliString, PhaseMatchesMatrixColumns) {
  for (const auto &s : all_strings(3)) {
    const PauliString p = PauliString::parse(s);
    const auto m = oracle::pauli(s);
    for (std::uint64_t i = 0; i < 8; ++i)
      EXPECT_LT(std::abs(m(i ^ p.x_mask(), i) - p.phase(i)), 1e-15) << s << " " << i;
  }
}

TEST(PauliString, MultiplyMatchesMatrixProduct) {
  const auto strings = all_strings(2);
  for (const auto &a : strings)
    for (const auto &b : strings) {
      const auto [factor, c] = PauliString::parse(a).multiply(PauliString::parse(b));
      oracle::Matrix lhs = oracle::matmul(oracle::pauli(a), oracle::pauli(b));
      oracle::Matrix rhs = oracle::pauli(c.to_string());
      for (auto &v : rhs.a)
        v *= factor;
      EXPECT_LT(oracle::max_abs_diff(lhs, rhs), 1e-15) << a << "*" << b;
    }
}

TEST(PauliSum, CanonicalFormMergesDuplicates) {
  const PauliSum h(2, {{1.0, PauliString::parse("ZI")},
                       {0.5, PauliString::parse("XX")},
                       {-1.0, PauliString::parse("ZI")},
                       {0.25, PauliString::parse("XX")}});
  ASSERT_EQ(h.size(), 1u);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliString::parse("XX")), 0.75);
  EXPECT_EQ(h.coefficient(PauliString::parse("ZI")), 0.0);
  EXPECT_EQ(kind_of([] { PauliSum(2, {{1.0, PauliString::parse("X")}}); }),
            ErrorKind::Shape);
}

TEST(PauliSum, ScaledAndPlus) {
  const PauliSum a(1, {{1.0, PauliString::parse("Z")}});
  const PauliSum b(1, {{2.0, PauliString::parse("X")}});
  const PauliSum s = a.plus(b).scaled(-2.0);
  EXPECT_DOUBLE_EQ(s.coefficient(PauliString::parse("Z")), -2.0);
  EXPECT_DOUBLE_EQ(s.coefficient(PauliString::parse("X")), -4.0);
}

TEST(Decompose, RandomHermitianRoundTrip) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const auto m = oracle::random_hermitian(std::size_t{1} << n, rng);
    const PauliSum h = decompose_hermitian(to_dense(m));
    worst = std::max(worst, oracle::max_abs_diff(oracle_matrix(h), m));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Decompose, CoefficientsAreNormalizedTraces) {
  std::mt19937_64 rng(11);
  const auto m = oracle::random_hermitian(4, rng);
  const PauliSum h = decompose_hermitian(to_dense(m));
  for (const auto &s : all_strings(2)) {
    const auto pm = oracle::matmul(oracle::pauli(s), m);
    cplx tr = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      tr += pm(i, i);
    EXPECT_NEAR(h.coefficient(PauliString::parse(s)), tr.real() / 4.0, 1e-13) << s;
    EXPECT_NEAR(tr.imag(), 0.0, 1e-12);
  }
}

TEST(Decompose, DiagonalPathAgreesWithDense) {
  const std::vector<double> d{0.3, -1.0, 2.5, 0.0, 1.25, 4.0, -0.5, 0.75};
  DenseMatrix m(8);
  for (std::size_t i = 0; i < 8; ++i)
    m(i, i) = d[i];
  const PauliSum a = decompose_diagonal(d);
  const PauliSum b = decompose_hermitian(m);
  ASSERT_EQ(a.size(), b.size());
  for (const auto &t : b.terms())
    EXPECT_NEAR(a.coefficient(t.string), t.coeff, 1e-15);
  for (const auto &t : a.terms())
    EXPECT_TRUE(t.string.is_diagonal());
}

TEST(Decompose, SingleStringIsRecovered) {
  const PauliSum h = decompose_hermitian(pauli_matrix(PauliString::parse("YXZ")));
  ASSERT_EQ(h.size(), 1u);
  EXPECT_NEAR(h.coefficient(PauliString::parse("YXZ")), 1.0, 1e-15);
}

TEST(Decompose, RejectsNonHermitianAndBadShapes) {
  DenseMatrix m(2);
  m(0, 1) = 1.0;
  EXPECT_EQ(kind_of([&] { decompose_hermitian(m); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { decompose_hermitian(DenseMatrix(3)); }), ErrorKind::Shape);
  EXPECT_EQ(kind_of([] { pauli_matrix(PauliString(13)); }), ErrorKind::Size);
}

TEST(PauliText, FormatParseRoundTrip) {
  std::mt19937_64 rng(3);
  const PauliSum h = random_pauli_sum(5, 12, rng);
  const PauliSum back = parse_pauli_sum(format_pauli_sum(h));
  EXPECT_EQ(back, h);
}

TEST(PauliText, CommentsAndErrors) {
  const PauliSum h = parse_pauli_sum("# comment\nqubits 2\n\n0.5 XZ\n-1 II\n");
  EXPECT_DOUBLE_EQ(h.coefficient(PauliString::parse("XZ")), 0.5);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliString::parse("II")), -1.0);

  try {
    parse_pauli_sum("qubits 2\n0.5 XZ\nabc XX\n", "h.txt");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
  EXPECT_EQ(kind_of([] { parse_pauli_sum("1.0 X\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_pauli_sum("qubits 2\n1.0 X\n"); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_pauli_sum("qubits 1\n1.0 Q\n"); }), ErrorKind::Parse);
}
