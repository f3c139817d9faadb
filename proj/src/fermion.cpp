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

#include "vqm/fermion.hpp"

#include <cmath>

#include "vqm/error.hpp"

namespace vqm {

std::vector<std::pair<cplx, PauliString>> jordan_wigner_ladder(int n_qubits,
                                                               LadderOp op) {
  require(op.orbital >= 0 && op.orbital < n_qubits, ErrorKind::Index,
          "spin-orbital " + std::to_string(op.orbital) + " out of range");
  const std::uint64_t bit = std::uint64_t{1} << op.orbital;
  const std::uint64_t parity = bit - 1;
  // (X -/+ iY)/2 on the target, Z on every lower qubit.
  const PauliString xs(n_qubits, bit, parity);
  const PauliString ys(n_qubits, bit, parity | bit);
  const cplx y_coeff = op.create ? cplx{0.0, -0.5} : cplx{0.0, 0.5};
  return {{cplx{0.5, 0.0}, xs}, {y_coeff, ys}};
}

void ComplexPauliSum::add(cplx coeff, const PauliString &p) {
  require(p.num_qubits() == n_, ErrorKind::Shape, "Pauli string size mismatch");
  if (coeff == cplx{})
    return;
  auto [it, inserted] = terms_.try_emplace(p, coeff);
  if (!inserted)
    it->second += coeff;
}

void ComplexPauliSum::add(const ComplexPauliSum &other, cplx scale) {
  require(other.n_ == n_, ErrorKind::Shape, "Pauli sum size mismatch");
  for (const auto &[p, c] : other.terms_)
    add(scale * c, p);
}

void ComplexPauliSum::add_ladder_product(cplx coeff, std::span<const LadderOp> ops) {
  std::vector<std::pair<cplx, PauliString>> acc{{coeff, PauliString(n_)}};
  for (const auto &op : ops) {
    const auto factor = jordan_wigner_ladder(n_, op);
    std::vector<std::pair<cplx, PauliString>> next;
    next.reserve(acc.size() * factor.size());
    for (const auto &[ca, pa] : acc) {
      for (const auto &[cb, pb] : factor) {
        auto [phase, prod] = pa.multiply(pb);
        next.emplace_back(ca * cb * phase, prod);
      }
    }
    acc = std::move(next);
  }
  for (const auto &[c, p] : acc)
    add(c, p);
}

double ComplexPauliSum::max_imag() const {
  double worst = 0.0;
  for (const auto &[p, c] : terms_)
    worst = std::max(worst, std::abs(c.imag()));
  return worst;
}

double ComplexPauliSum::max_real() const {
  double worst = 0.0;
  for (const auto &[p, c] : terms_)
    worst = std::max(worst, std::abs(c.real()));
  return worst;
}

PauliSum ComplexPauliSum::to_real(double imag_tol, double drop_tol) const {
  std::vector<PauliTerm> out;
  for (const auto &[p, c] : terms_) {
    if (std::abs(c.imag()) > imag_tol)
      fail(ErrorKind::Validation, "operator is not Hermitian: coefficient of " +
                                      p.to_string() + " has imaginary part " +
                                      std::to_string(c.imag()));
    if (std::abs(c.real()) >= drop_tol)
      out.push_back({c.real(), p});
  }
  return PauliSum(n_, std::move(out));
}

} // namespace vqm
