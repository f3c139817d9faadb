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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vqm/pauli.hpp"

namespace vqm {

/// Truncated harmonic oscillator: levels j = 0 .. 2^n - 1 with energy
/// omega * (j + 1/2), level j stored in computational basis state |j>.
struct ShoSpec {
  double omega = 0.5;
  int n_qubits = 4;
};

/// Builds the level-basis matrix omega (a^dagger a + 1/2) from the ladder
/// actions and expands it in Z strings. The operator is diagonal, so the
/// expansion runs without forming a dense matrix and accepts registers up
/// to the simulator cap.
PauliSum build_sho(const ShoSpec &spec);

/// Diagonal of the truncated number operator a^dagger a, derived from
/// a|j> = sqrt(j)|j-1> and a^dagger|j> = sqrt(j+1)|j+1>.
std::vector<double> sho_number_diagonal(std::size_t levels);

enum class TwoBodyOrder {
  Chemist,   ///< value i j k l = (ij|kl)
  Physicist, ///< value i j k l = <ij|kl> = (ik|jl)
};

/// Molecular integrals over spin-orbitals.
///
/// Spin-orbitals interleave spatial orbitals: spin-orbital 2k is spatial
/// orbital k with spin up, 2k+1 spin down. Two-body values are chemist
/// notation (pq|rs) = int phi_p*(1) phi_q(1) r12^-1 phi_r*(2) phi_s(2).
/// The Hamiltonian they define is
///   E_core + sum_pq h_pq a+_p a_q + 1/2 sum_pqrs (pq|rs) a+_p a+_r a_s a_q.
class FermionIntegrals {
public:
  FermionIntegrals() = default;
  explicit FermionIntegrals(int n_spin_orbitals);

  int num_spin_orbitals() const noexcept { return n_; }
  int num_electrons() const noexcept { return n_electrons_; }
  void set_num_electrons(int n) { n_electrons_ = n; }
  double core_energy() const noexcept { return core_; }
  void set_core_energy(double e) { core_ = e; }

  double one_body(int p, int q) const { return h1_[idx2(p, q)]; }
  double &one_body(int p, int q) { return h1_[idx2(p, q)]; }
  double two_body(int p, int q, int r, int s) const { return h2_[idx4(p, q, r, s)]; }
  double &two_body(int p, int q, int r, int s) { return h2_[idx4(p, q, r, s)]; }

  /// Largest violation of h_pq = h_qp and of the 8-fold real two-body symmetry.
  double symmetry_violation() const;

private:
  std::size_t idx2(int p, int q) const {
    return static_cast<std::size_t>(p) * n_ + q;
  }
  std::size_t idx4(int p, int q, int r, int s) const {
    return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
  }

  int n_ = 0;
  int n_electrons_ = 0;
  double core_ = 0.0;
  std::vector<double> h1_;
  std::vector<double> h2_;
};

/// FCIDUMP reader. Header `&FCI NORB=..,NELEC=.., ... &END` (or `/`), then
/// `value i j k l` lines with 1-based spatial indices: `i j 0 0` one-body,
/// `0 0 0 0` core energy, `i 0 0 0` orbital energies (read and ignored).
/// Stored unique elements are completed by symmetry; conflicting duplicates
/// (beyond 1e-8) raise a validation error.
FermionIntegrals parse_fcidump(std::string_view text, TwoBodyOrder order,
                               const std::string &source = "<string>");
FermionIntegrals load_fcidump(const std::filesystem::path &path,
                              TwoBodyOrder order = TwoBodyOrder::Chemist);

/// Qubit Hamiltonian of the integrals (qubit p = spin-orbital p).
PauliSum jordan_wigner(const FermionIntegrals &f);

PauliSum load_pauli_sum(const std::filesystem::path &path);
void save_pauli_sum(const PauliSum &h, const std::filesystem::path &path);

/// Writes to a sibling temporary and renames it over the target.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);
std::string read_file(const std::filesystem::path &path);

} // namespace vqm
