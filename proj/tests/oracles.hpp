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

// Reference implementations used only by the tests. They build everything
// from 2x2 matrices, Kronecker products and explicit occupation-number
// algebra, so they share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct Matrix {
  std::size_t n = 0;
  std::vector<cplx> a;

  explicit Matrix(std::size_t dim = 0) : n(dim), a(dim * dim) {}
  cplx &operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
      m(i, i) = 1.0;
    return m;
  }
};

inline Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.n * b.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j)
      for (std::size_t k = 0; k < b.n; ++k)
        for (std::size_t l = 0; l < b.n; ++l)
          out(i * b.n + k, j * b.n + l) = a(i, j) * b(k, l);
  return out;
}

inline Matrix matmul(const Matrix &a, const Matrix &b) {
  Matrix out(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = 0; k < a.n; ++k) {
      const cplx v = a(i, k);
      if (v == cplx{})
        continue;
      for (std::size_t j = 0; j < a.n; ++j)
        out(i, j) += v * b(k, j);
    }
  return out;
}

inline Matrix add(const Matrix &a, const Matrix &b, cplx scale = 1.0) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.a.size(); ++i)
    out.a[i] += scale * b.a[i];
  return out;
}

inline Matrix adjoint(const Matrix &a) {
  Matrix out(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j)
      out(i, j) = std::conj(a(j, i));
  return out;
}

inline Matrix letter(char c) {
  Matrix m(2);
  const cplx I(0.0, 1.0);
  switch (c) {
  case 'I': m(0, 0) = 1.0; m(1, 1) = 1.0; break;
  case 'X': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
  case 'Y': m(0, 1) = -I; m(1, 0) = I; break;
  case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  default: break;
  }
  return m;
}

/// Letters listed qubit 0 first; qubit 0 is the least significant bit, so
/// the matrix is kron(P_{n-1}, ..., P_0).
inline Matrix pauli(const std::string &letters) {
  Matrix m = Matrix::identity(1);
  for (char c : letters)
    m = kron(letter(c), m);
  return m;
}

/// 2x2 gate u on one qubit of an n-qubit register.
inline Matrix embed(const Matrix &u, int qubit, int n) {
  Matrix m = Matrix::identity(1);
  for (int q = 0; q < n; ++q)
    m = kron(q == qubit ? u : Matrix::identity(2), m);
  return m;
}

inline Matrix ry(double t) {
  Matrix m(2);
  m(0, 0) = std::cos(t / 2);
  m(0, 1) = -std::sin(t / 2);
  m(1, 0) = std::sin(t / 2);
  m(1, 1) = std::cos(t / 2);
  return m;
}

inline Matrix rz(double t) {
  Matrix m(2);
  m(0, 0) = std::exp(cplx(0.0, -t / 2));
  m(1, 1) = std::exp(cplx(0.0, t / 2));
  return m;
}

/// |0><0| (x) I + |1><1| (x) X written with projectors on the control.
inline Matrix cnot(int control, int target, int n) {
  Matrix p0(2), p1(2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return add(embed(p0, control, n), matmul(embed(p1, control, n), embed(letter('X'), target, n)));
}

/// exp(-i t P / 2) = cos(t/2) I - i sin(t/2) P for a Pauli string P.
inline Matrix pauli_rotation(const std::string &letters, double t) {
  Matrix p = pauli(letters);
  Matrix out = Matrix::identity(p.n);
  for (auto &v : out.a)
    v *= std::cos(t / 2);
  return add(out, p, cplx(0.0, -std::sin(t / 2)));
}

inline std::vector<cplx> apply(const Matrix &m, const std::vector<cplx> &v) {
  std::vector<cplx> out(m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      out[i] += m(i, j) * v[j];
  return out;
}

inline double expectation(const Matrix &m, const std::vector<cplx> &v) {
  const auto mv = apply(m, v);
  cplx s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += std::conj(v[i]) * mv[i];
  return s.real();
}

inline Matrix random_hermitian(std::size_t dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = g(rng);
    for (std::size_t j = i + 1; j < dim; ++j) {
      m(i, j) = cplx(g(rng), g(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

/// Second-quantized operators acting on occupation-number bit strings.
/// Orbital p is bit p; the sign of a_p and a^dagger_p is (-1) to the
/// number of occupied orbitals below p.
struct Fock {
  int n;

  /// a^dagger_p (create) or a_p on |bits>; returns false when it vanishes.
  static bool ladder(std::uint64_t &bits, double &sign, int p, bool create) {
    const bool occupied = (bits >> p) & 1u;
    if (occupied == create)
      return false;
    const std::uint64_t below = bits & ((std::uint64_t{1} << p) - 1);
    if (__builtin_popcountll(below) & 1)
      sign = -sign;
    bits ^= std::uint64_t{1} << p;
    return true;
  }

  /// Matrix of the product ops[0] ops[1] ... (rightmost applied first).
  Matrix product(const std::vector<std::pair<int, bool>> &ops) const {
    const std::size_t dim = std::size_t{1} << n;
    Matrix m(dim);
    for (std::size_t col = 0; col < dim; ++col) {
      std::uint64_t bits = col;
      double sign = 1.0;
      bool alive = true;
      for (auto it = ops.rbegin(); it != ops.rend() && alive; ++it)
        alive = ladder(bits, sign, it->first, it->second);
      if (alive)
        m(bits, col) += sign;
    }
    return m;
  }
};

/// exp(m) by scaling and squaring of a truncated Taylor series.
inline Matrix expm(const Matrix &m) {
  double norm = 0.0;
  for (auto v : m.a)
    norm += std::abs(v);
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  Matrix a = m;
  for (auto &v : a.a)
    v *= std::ldexp(1.0, -squarings);
  Matrix out = Matrix::identity(m.n);
  Matrix term = Matrix::identity(m.n);
  for (int k = 1; k <= 24; ++k) {
    term = matmul(term, a);
    for (auto &v : term.a)
      v /= static_cast<double>(k);
    out = add(out, term);
  }
  for (int s = 0; s < squarings; ++s)
    out = matmul(out, out);
  return out;
}

inline double max_abs_diff(const Matrix &a, const Matrix &b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i)
    d = std::max(d, std::abs(a.a[i] - b.a[i]));
  return d;
}

} // namespace oracle
