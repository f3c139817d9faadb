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
#include <span>
#include <string>
#include <vector>

#include "vqm/pauli.hpp"
#include "vqm/statevector.hpp"

namespace vqm {

enum class AnsatzKind { HEA, UCCSD };

const char *to_string(AnsatzKind kind);

enum class GateKind { RY, RZ, X, CNOT, PauliRotation };

/// One step of an ansatz program. Parameterized gates rotate by
/// scale * theta[param]; unparameterized rotations (param < 0) use angle.
struct Instruction {
  GateKind gate = GateKind::RY;
  int qubit = 0;  ///< target (control for CNOT)
  int target = 0; ///< CNOT target
  PauliString pauli;
  int param = -1;
  double scale = 1.0;
  double angle = 0.0;

  bool parameterized() const noexcept { return param >= 0; }
  friend bool operator==(const Instruction &, const Instruction &) = default;
};

/// Spin-conserving excitations out of the reference determinant.
/// Spin-orbitals are interleaved: even index spin up, odd index spin down.
struct ExcitationList {
  struct Single {
    int occupied;
    int virtual_;
  };
  struct Double {
    int occupied[2];
    int virtual_[2];
  };
  std::vector<Single> singles;
  std::vector<Double> doubles;

  std::size_t size() const noexcept { return singles.size() + doubles.size(); }
};

/// Immutable parameterized circuit acting on |0...0>.
class AnsatzProgram {
public:
  AnsatzProgram(AnsatzKind kind, int n_qubits, int n_params,
                std::vector<Instruction> instructions);

  AnsatzKind kind() const noexcept { return kind_; }
  int num_qubits() const noexcept { return n_qubits_; }
  int num_params() const noexcept { return n_params_; }
  std::span<const Instruction> instructions() const noexcept { return program_; }

  /// HEA layer count (0 for UCCSD).
  int layers() const noexcept { return layers_; }
  /// UCCSD excitations (empty for HEA).
  const ExcitationList &excitations() const noexcept { return excitations_; }
  int num_electrons() const noexcept { return n_electrons_; }

  /// Indices of parameterized instructions, in program order.
  std::span<const std::size_t> occurrences() const noexcept { return occurrences_; }

  /// Structured-text descriptor sufficient to rebuild the program.
  std::string descriptor() const;

private:
  friend AnsatzProgram build_hea(int, int);
  friend std::pair<AnsatzProgram, ExcitationList> build_uccsd(int, int);

  AnsatzKind kind_;
  int n_qubits_;
  int n_params_;
  std::vector<Instruction> program_;
  std::vector<std::size_t> occurrences_;
  int layers_ = 0;
  int n_electrons_ = 0;
  ExcitationList excitations_;
};

/// Layers of RY then RZ on every qubit (ascending), followed by CNOT(i, j)
/// for every i < j in lexicographic order. 2 * n_qubits * layers parameters;
/// parameter 2*(l*n + i) drives RY and 2*(l*n + i) + 1 drives RZ of qubit i
/// in layer l.
AnsatzProgram build_hea(int n_qubits, int layers);

/// Spin-conserving singles and doubles from the reference with the lowest
/// n_electrons spin-orbitals occupied.
ExcitationList uccsd_excitations(int n_spin_orbitals, int n_electrons);

/// UCCSD program: X on the occupied qubits, then for every excitation e
/// (singles first, then doubles) the Pauli rotations of exp(theta_e (T - T^dagger))
/// in a single first-order Trotter step.
std::pair<AnsatzProgram, ExcitationList> build_uccsd(int n_spin_orbitals,
                                                     int n_electrons);

/// Rebuilds a program from descriptor() output.
AnsatzProgram parse_ansatz_descriptor(const std::string &text);

/// Scalar observable of a prepared state (energy, penalty, ...).
using StateObjective = std::function<double(const StateVector &)>;

/// Prepares U(theta)|0...0>.
StateVector run_ansatz(const AnsatzProgram &a, std::span<const double> theta,
                       const Simulator &sim = Simulator{});

double energy(const AnsatzProgram &a, const PauliSum &h,
              std::span<const double> theta, const Simulator &sim = Simulator{});

/// Parameter-shift gradient of objective(U(theta)|0>).
///
/// Every parameterized occurrence is shifted by +-pi/2 on its own and the
/// differences, times the occurrence's angle scale, are summed per
/// parameter. Occurrence evaluations run in parallel on the simulator's
/// workers (each with a single-threaded simulator); the reduction order is
/// fixed, so the result does not depend on the worker count.
std::vector<double> parameter_shift_gradient(const AnsatzProgram &a,
                                             const StateObjective &objective,
                                             std::span<const double> theta,
                                             const Simulator &sim = Simulator{});

std::vector<double> parameter_shift_gradient(const AnsatzProgram &a,
                                             const PauliSum &h,
                                             std::span<const double> theta,
                                             const Simulator &sim = Simulator{});

} // namespace vqm
