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

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "vqm/pauli.hpp"

namespace vqm {

/// One fermionic ladder operator: a_p (create = false) or a^dagger_p.
struct LadderOp {
  int orbital = 0;
  bool create = false;
};

/// Complex-weighted Pauli sum used while expanding fermionic products.
/// Keys are ordered, so iteration order is deterministic.
class ComplexPauliSum {
public:
  explicit ComplexPauliSum(int n_qubits) : n_(n_qubits) {}

  int num_qubits() const noexcept { return n_; }
  void add(cplx coeff, const PauliString &p);
  /// Adds coeff * (product of ladder operators, leftmost applied last),
  /// each mapped with Jordan-Wigner:
  ///   a^dagger_p = Z_0 ... Z_{p-1} (X_p - i Y_p) / 2.
  void add_ladder_product(cplx coeff, std::span<const LadderOp> ops);
  void add(const ComplexPauliSum &other, cplx scale = 1.0);

  const std::map<PauliString, cplx> &terms() const noexcept { return terms_; }

  /// Largest |Im(c)| over terms.
  double max_imag() const;
  /// Largest |Re(c)| over terms.
  double max_real() const;

  /// Real part as a PauliSum after checking |Im| <= imag_tol; terms with
  /// |Re| < drop_tol are omitted.
  PauliSum to_real(double imag_tol = 1e-10, double drop_tol = 1e-14) const;

private:
  int n_;
  std::map<PauliString, cplx> terms_;
};

/// Jordan-Wigner image of a single ladder operator (two Pauli strings).
std::vector<std::pair<cplx, PauliString>> jordan_wigner_ladder(int n_qubits,
                                                               LadderOp op);

} // namespace vqm
