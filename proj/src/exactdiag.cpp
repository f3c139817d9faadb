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

#include "vqm/exactdiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vqm/error.hpp"
#include "vqm/statevector.hpp"

namespace vqm {

namespace {

constexpr int kMaxQlIterations = 60;

// Reduces a (Hermitian, n x n) to tridiagonal form in place with Hermitian
// Householder reflectors P = I - u u^H, |u|^2 = 2. On return diag holds the
// real diagonal, sub[k] = A(k+1, k) (complex), and q (when non-null) the
// accumulated unitary with A_original = Q T Q^H.
void householder_tridiagonalize(DenseMatrix &a, std::vector<double> &diag,
                                std::vector<cplx> &sub, DenseMatrix *q) {
  const std::size_t n = a.dim();
  std::vector<cplx> u(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm_sq = 0.0;
    for (std::size_t i = k + 1; i < n; ++i)
      xnorm_sq += std::norm(a(i, k));
    double tail_sq = xnorm_sq - std::norm(a(k + 1, k));
    if (tail_sq <= 0.0 || xnorm_sq == 0.0)
      continue;
    const double xnorm = std::sqrt(xnorm_sq);
    const cplx x0 = a(k + 1, k);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0, 0.0};
    // w = x + phase*|x| e1 ; u = sqrt(2) w / |w|
    std::fill(u.begin(), u.end(), cplx{});
    u[k + 1] = x0 + phase * xnorm;
    for (std::size_t i = k + 2; i < n; ++i)
      u[i] = a(i, k);
    double wnorm_sq = 0.0;
    for (std::size_t i = k + 1; i < n; ++i)
      wnorm_sq += std::norm(u[i]);
    const double scale = std::sqrt(2.0 / wnorm_sq);
    for (std::size_t i = k + 1; i < n; ++i)
      u[i] *= scale;

    // p = A u over the active block (rows/cols k..n-1; u vanishes at <= k).
    for (std::size_t i = k; i < n; ++i) {
      cplx acc{};
      for (std::size_t j = k + 1; j < n; ++j)
        acc += a(i, j) * u[j];
      p[i] = acc;
    }
    cplx uhp{};
    for (std::size_t i = k + 1; i < n; ++i)
      uhp += std::conj(u[i]) * p[i];
    const double half_k = 0.5 * uhp.real();
    for (std::size_t i = k; i < n; ++i)
      p[i] -= half_k * u[i];
    // A <- A - u p^H - p u^H
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = k; j < n; ++j)
        a(i, j) -= u[i] * std::conj(p[j]) + p[i] * std::conj(u[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }
    if (q != nullptr) {
      // Q <- Q P
      for (std::size_t r = 0; r < n; ++r) {
        cplx qu{};
        for (std::size_t j = k + 1; j < n; ++j)
          qu += (*q)(r, j) * u[j];
        for (std::size_t j = k + 1; j < n; ++j)
          (*q)(r, j) -= qu * std::conj(u[j]);
      }
    }
  }
  diag.resize(n);
  sub.assign(n > 0 ? n - 1 : 0, cplx{});
  for (std::size_t i = 0; i < n; ++i)
    diag[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i)
    sub[i] = a(i + 1, i);
}

// Implicit-shift QL on a real symmetric tridiagonal (diag d, off-diagonal e
// with e[i] coupling i and i+1, e[n-1] = 0). Column rotations are applied to
// v when non-null.
void tridiagonal_ql(std::vector<double> &d, std::vector<double> &e,
                    DenseMatrix *v) {
  const std::size_t n = d.size();
  if (n == 0)
    return;
  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1)
      ++m;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxQlIterations)
          fail(ErrorKind::Numerical, "QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0)
          r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i)
          d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (v != nullptr) {
            for (std::size_t k = 0; k < n; ++k) {
              const cplx hv = (*v)(k, ii + 1);
              (*v)(k, ii + 1) = s * (*v)(k, ii) + c * hv;
              (*v)(k, ii) = c * (*v)(k, ii) - s * hv;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void check_hermitian_input(const DenseMatrix &m) {
  const std::size_t dim = m.dim();
  if (dim == 0)
    fail(ErrorKind::Shape, "empty matrix");
  if (dim > (std::size_t{1} << kDenseQubitCap))
    fail(ErrorKind::Size, "matrix dimension " + std::to_string(dim) +
                              " exceeds dense cap");
  const double dev = m.hermiticity_deviation();
  if (dev > 1e-10)
    fail(ErrorKind::Validation,
         "matrix is not Hermitian (max deviation " + std::to_string(dev) + ")");
}

} // namespace

Spectrum eigen_hermitian(const DenseMatrix &m, bool with_vectors) {
  check_hermitian_input(m);
  const std::size_t n = m.dim();
  DenseMatrix a = m;
  DenseMatrix q;
  if (with_vectors)
    q = DenseMatrix::identity(n);

  std::vector<double> d;
  std::vector<cplx> sub;
  householder_tridiagonalize(a, d, sub, with_vectors ? &q : nullptr);

  // D^H T D has real subdiagonal |sub| for D_{k+1} = D_k sub_k / |sub_k|.
  std::vector<double> e(n, 0.0);
  cplx dk{1.0, 0.0};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double mag = std::abs(sub[k]);
    e[k] = mag;
    const cplx next = mag > 0.0 ? dk * sub[k] / mag : dk;
    if (with_vectors)
      for (std::size_t r = 0; r < n; ++r)
        q(r, k + 1) *= next;
    dk = next;
  }

  tridiagonal_ql(d, e, with_vectors ? &q : nullptr);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  Spectrum out;
  out.eigenvalues.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    out.eigenvalues[j] = d[order[j]];
  if (with_vectors) {
    out.eigenvectors = DenseMatrix(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 0; r < n; ++r)
        out.eigenvectors(r, j) = q(r, order[j]);
  }
  return out;
}

std::vector<double> eigenvalues(const PauliSum &h) {
  const auto terms = h.terms();
  const bool diagonal = std::all_of(terms.begin(), terms.end(), [](const auto &t) {
    return t.string.is_diagonal();
  });
  const int cap = diagonal ? kSimulatorQubitCap : kDenseQubitCap;
  if (h.num_qubits() > cap)
    fail(ErrorKind::Size, "exact diagonalization limited to " + std::to_string(cap) +
                              " qubits" + (diagonal ? "" : " for non-diagonal operators"));
  if (diagonal) {
    const std::size_t dim = std::size_t{1} << h.num_qubits();
    std::vector<double> values(dim, 0.0);
    for (const auto &t : terms)
      for (std::size_t i = 0; i < dim; ++i)
        values[i] += t.coeff * t.string.phase(i).real();
    std::sort(values.begin(), values.end());
    return values;
  }
  return eigen_hermitian(pauli_sum_matrix(h), false).eigenvalues;
}

double ground_energy(const PauliSum &h) { return eigenvalues(h).front(); }

} // namespace vqm
