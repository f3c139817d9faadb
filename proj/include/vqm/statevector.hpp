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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "vqm/pauli.hpp"

namespace vqm {

/// Largest register the simulator will allocate.
inline constexpr int kSimulatorQubitCap = 24;

/// Dense amplitude vector of an n-qubit register (qubit 0 = LSB of index).
class StateVector {
public:
  StateVector() = default;

  /// |0...0>
  static StateVector zero(int n_qubits);
  /// Computational basis state |index>.
  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Takes ownership of amplitudes; length must be 2^n. Not renormalized.
  static StateVector from_amplitudes(std::vector<cplx> amplitudes);

  int num_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amp_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amp_; }
  std::span<cplx> amplitudes() noexcept { return amp_; }
  cplx operator[](std::size_t i) const { return amp_[i]; }

  double norm_sq() const;

  /// Debug dump: header "index,re,im" then one row per amplitude.
  void write_csv(std::ostream &out) const;

private:
  int n_ = 0;
  std::vector<cplx> amp_;
};

StateVector zero_state(int n_qubits);

/// Gate kernels and observables over StateVectors.
///
/// Owns no state besides its worker count; a StateVector being mutated must
/// not be shared with another thread. Kernels parallelize over amplitude
/// pairs once the register is large enough to amortize a fork.
/// Reductions sum fixed-size chunks in index order, so results do not
/// depend on the worker count.
class Simulator {
public:
  explicit Simulator(int threads = 1);

  int threads() const noexcept { return threads_; }

  // In-place kernels.
  void ry(StateVector &s, int qubit, double theta) const;
  void rz(StateVector &s, int qubit, double theta) const;
  void x(StateVector &s, int qubit) const;
  void cnot(StateVector &s, int control, int target) const;
  /// exp(-i theta P / 2)
  void pauli_rotation(StateVector &s, const PauliString &p, double theta) const;
  void apply_pauli(StateVector &s, const PauliString &p) const;

  /// sum_j w_j <psi|P_j|psi>
  double expectation(const PauliSum &h, const StateVector &s) const;
  /// |<a|b>|^2
  double overlap_sq(const StateVector &a, const StateVector &b) const;
  /// <a|b>
  cplx inner(const StateVector &a, const StateVector &b) const;

  /// Amplitudes per reduction chunk.
  static constexpr std::size_t kChunk = 4096;
  /// Registers below this size run kernels on the calling thread.
  static constexpr std::size_t kParallelThreshold = std::size_t{1} << 12;

private:
  bool parallel_for(std::size_t dim) const noexcept {
    return threads_ > 1 && dim >= kParallelThreshold;
  }

  int threads_;
};

// Functional forms on a single-threaded simulator.
StateVector apply_ry(StateVector s, int qubit, double theta);
StateVector apply_rz(StateVector s, int qubit, double theta);
StateVector apply_cnot(StateVector s, int control, int target);
StateVector apply_pauli_rotation(StateVector s, const PauliString &p, double theta);
StateVector apply_pauli(const PauliString &p, StateVector s);
double expectation(const PauliSum &h, const StateVector &s);
double overlap_sq(const StateVector &a, const StateVector &b);

} // namespace vqm
