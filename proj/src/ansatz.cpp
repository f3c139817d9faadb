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

#include "vqm/ansatz.hpp"

#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "vqm/error.hpp"
#include "vqm/fermion.hpp"

namespace vqm {

const char *to_string(AnsatzKind kind) {
  return kind == AnsatzKind::HEA ? "hea" : "uccsd";
}

AnsatzProgram::AnsatzProgram(AnsatzKind kind, int n_qubits, int n_params,
                             std::vector<Instruction> instructions)
    : kind_(kind), n_qubits_(n_qubits), n_params_(n_params),
      program_(std::move(instructions)) {
  require(n_qubits >= 1 && n_qubits <= kSimulatorQubitCap, ErrorKind::Size,
          "ansatz qubit count outside simulator range");
  require(n_params >= 0, ErrorKind::Argument, "negative parameter count");
  std::vector<char> used(static_cast<std::size_t>(n_params), 0);
  auto in_range = [n_qubits](int q) { return q >= 0 && q < n_qubits; };
  for (std::size_t k = 0; k < program_.size(); ++k) {
    const auto &ins = program_[k];
    switch (ins.gate) {
    case GateKind::CNOT:
      require(in_range(ins.qubit) && in_range(ins.target) && ins.qubit != ins.target,
              ErrorKind::Index, "invalid CNOT operands");
      break;
    case GateKind::PauliRotation:
      require(ins.pauli.num_qubits() == n_qubits, ErrorKind::Shape,
              "Pauli rotation size mismatch");
      break;
    default:
      require(in_range(ins.qubit), ErrorKind::Index, "gate target out of range");
    }
    if (ins.parameterized()) {
      require(ins.param < n_params, ErrorKind::Index, "parameter index out of range");
      require(ins.gate != GateKind::CNOT && ins.gate != GateKind::X,
              ErrorKind::Argument, "only rotations can be parameterized");
      used[static_cast<std::size_t>(ins.param)] = 1;
      occurrences_.push_back(k);
    }
  }
  for (int p = 0; p < n_params; ++p)
    require(used[static_cast<std::size_t>(p)] != 0, ErrorKind::Argument,
            "parameter " + std::to_string(p) + " is never used");
}

std::string AnsatzProgram::descriptor() const {
  std::ostringstream out;
  out << "kind " << to_string(kind_) << "\n";
  if (kind_ == AnsatzKind::HEA) {
    out << "qubits " << n_qubits_ << "\nlayers " << layers_ << "\n";
  } else {
    out << "spin_orbitals " << n_qubits_ << "\nelectrons " << n_electrons_ << "\n";
    for (const auto &s : excitations_.singles)
      out << "single " << s.occupied << " " << s.virtual_ << "\n";
    for (const auto &d : excitations_.doubles)
      out << "double " << d.occupied[0] << " " << d.occupied[1] << " "
          << d.virtual_[0] << " " << d.virtual_[1] << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Builders

AnsatzProgram build_hea(int n_qubits, int layers) {
  require(n_qubits >= 1, ErrorKind::Argument, "HEA needs at least one qubit");
  require(layers >= 1, ErrorKind::Argument, "HEA needs at least one layer");
  std::vector<Instruction> prog;
  int param = 0;
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i < n_qubits; ++i) {
      prog.push_back({.gate = GateKind::RY, .qubit = i, .param = param++});
      prog.push_back({.gate = GateKind::RZ, .qubit = i, .param = param++});
    }
    for (int i = 0; i < n_qubits; ++i)
      for (int j = i + 1; j < n_qubits; ++j)
        prog.push_back({.gate = GateKind::CNOT, .qubit = i, .target = j});
  }
  AnsatzProgram a(AnsatzKind::HEA, n_qubits, param, std::move(prog));
  a.layers_ = layers;
  return a;
}

ExcitationList uccsd_excitations(int n_spin_orbitals, int n_electrons) {
  require(n_spin_orbitals >= 1, ErrorKind::Argument,
          "UCCSD needs at least one spin-orbital");
  require(n_electrons >= 0 && n_electrons < n_spin_orbitals, ErrorKind::Argument,
          "electron count " + std::to_string(n_electrons) +
              " invalid for " + std::to_string(n_spin_orbitals) + " spin-orbitals");
  ExcitationList ex;
  const int n = n_spin_orbitals;
  const int ne = n_electrons;
  for (int i = 0; i < ne; ++i)
    for (int a = ne; a < n; ++a)
      if (i % 2 == a % 2)
        ex.singles.push_back({i, a});
  auto up_count = [](int p, int q) { return (p % 2 == 0) + (q % 2 == 0); };
  for (int i = 0; i < ne; ++i)
    for (int j = i + 1; j < ne; ++j)
      for (int a = ne; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (up_count(i, j) == up_count(a, b))
            ex.doubles.push_back({{i, j}, {a, b}});
  return ex;
}

namespace {

// exp(theta * G) with G = sum_m i c_m P_m  ->  rotations by -2 c_m theta.
void append_generator(std::vector<Instruction> &prog, const ComplexPauliSum &g,
                      int param) {
  if (g.max_real() > 1e-12)
    fail(ErrorKind::Numerical, "excitation generator is not anti-Hermitian");
  for (const auto &[p, c] : g.terms()) {
    if (std::abs(c.imag()) < 1e-14)
      continue;
    prog.push_back({.gate = GateKind::PauliRotation,
                    .qubit = 0,
                    .pauli = p,
                    .param = param,
                    .scale = -2.0 * c.imag()});
  }
}

} // namespace

std::pair<AnsatzProgram, ExcitationList> build_uccsd(int n_spin_orbitals,
                                                     int n_electrons) {
  auto ex = uccsd_excitations(n_spin_orbitals, n_electrons);
  const int n = n_spin_orbitals;
  std::vector<Instruction> prog;
  for (int i = 0; i < n_electrons; ++i)
    prog.push_back({.gate = GateKind::X, .qubit = i});

  int param = 0;
  for (const auto &s : ex.singles) {
    ComplexPauliSum g(n);
    const std::array<LadderOp, 2> t{{{s.virtual_, true}, {s.occupied, false}}};
    const std::array<LadderOp, 2> t_dag{{{s.occupied, true}, {s.virtual_, false}}};
    g.add_ladder_product(1.0, t);
    g.add_ladder_product(-1.0, t_dag);
    append_generator(prog, g, param++);
  }
  for (const auto &d : ex.doubles) {
    ComplexPauliSum g(n);
    const std::array<LadderOp, 4> t{{{d.virtual_[0], true},
                                     {d.virtual_[1], true},
                                     {d.occupied[1], false},
                                     {d.occupied[0], false}}};
    const std::array<LadderOp, 4> t_dag{{{d.occupied[0], true},
                                         {d.occupied[1], true},
                                         {d.virtual_[1], false},
                                         {d.virtual_[0], false}}};
    g.add_ladder_product(1.0, t);
    g.add_ladder_product(-1.0, t_dag);
    append_generator(prog, g, param++);
  }
  AnsatzProgram a(AnsatzKind::UCCSD, n, param, std::move(prog));
  a.n_electrons_ = n_electrons;
  a.excitations_ = ex;
  return {std::move(a), std::move(ex)};
}

AnsatzProgram parse_ansatz_descriptor(const std::string &text) {
  std::istringstream in(text);
  std::string key;
  std::string kind;
  int qubits = -1, layers = -1, spin_orbitals = -1, electrons = -1;
  std::size_t listed = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    if (!(fields >> key) || key[0] == '#')
      continue;
    if (key == "kind") {
      fields >> kind;
    } else if (key == "qubits") {
      fields >> qubits;
    } else if (key == "layers") {
      fields >> layers;
    } else if (key == "spin_orbitals") {
      fields >> spin_orbitals;
    } else if (key == "electrons") {
      fields >> electrons;
    } else if (key == "single" || key == "double") {
      ++listed;
      continue;
    } else {
      throw ParseError("<ansatz>", line_no, "unknown key '" + key + "'");
    }
    if (fields.fail())
      throw ParseError("<ansatz>", line_no, "invalid value for '" + key + "'");
  }
  if (kind == "hea") {
    if (qubits < 1 || layers < 1)
      throw ParseError("<ansatz>", 0, "hea descriptor needs qubits and layers");
    return build_hea(qubits, layers);
  }
  if (kind == "uccsd") {
    if (spin_orbitals < 1 || electrons < 0)
      throw ParseError("<ansatz>", 0,
                       "uccsd descriptor needs spin_orbitals and electrons");
    auto built = build_uccsd(spin_orbitals, electrons).first;
    if (listed != 0 && listed != built.excitations().size())
      fail(ErrorKind::Validation, "descriptor excitation list does not match "
                                  "the enumerated excitations");
    return built;
  }
  throw ParseError("<ansatz>", 0, "unknown ansatz kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Execution

namespace {

void check_theta(const AnsatzProgram &a, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(a.num_params()))
    fail(ErrorKind::Shape, "parameter vector has length " +
                               std::to_string(theta.size()) + ", ansatz expects " +
                               std::to_string(a.num_params()));
}

void apply_instruction(const Simulator &sim, StateVector &s, const Instruction &ins,
                       double angle) {
  switch (ins.gate) {
  case GateKind::RY:
    sim.ry(s, ins.qubit, angle);
    break;
  case GateKind::RZ:
    sim.rz(s, ins.qubit, angle);
    break;
  case GateKind::X:
    sim.x(s, ins.qubit);
    break;
  case GateKind::CNOT:
    sim.cnot(s, ins.qubit, ins.target);
    break;
  case GateKind::PauliRotation:
    sim.pauli_rotation(s, ins.pauli, angle);
    break;
  }
}

double angle_of(const Instruction &ins, std::span<const double> theta) {
  return ins.parameterized() ? ins.scale * theta[static_cast<std::size_t>(ins.param)]
                             : ins.angle;
}

void run_range(const Simulator &sim, StateVector &s, std::span<const Instruction> prog,
               std::size_t begin, std::span<const double> theta) {
  for (std::size_t k = begin; k < prog.size(); ++k)
    apply_instruction(sim, s, prog[k], angle_of(prog[k], theta));
}

// Snapshots of the state before each parameterized instruction are kept
// when they fit in this budget.
constexpr std::size_t kSnapshotBudgetBytes = std::size_t{256} << 20;

} // namespace

StateVector run_ansatz(const AnsatzProgram &a, std::span<const double> theta,
                       const Simulator &sim) {
  check_theta(a, theta);
  auto s = StateVector::zero(a.num_qubits());
  run_range(sim, s, a.instructions(), 0, theta);
  return s;
}

double energy(const AnsatzProgram &a, const PauliSum &h, std::span<const double> theta,
              const Simulator &sim) {
  if (h.num_qubits() != a.num_qubits())
    fail(ErrorKind::Shape, "Hamiltonian acts on " + std::to_string(h.num_qubits()) +
                               " qubits, ansatz on " + std::to_string(a.num_qubits()));
  return sim.expectation(h, run_ansatz(a, theta, sim));
}

std::vector<double> parameter_shift_gradient(const AnsatzProgram &a,
                                             const StateObjective &objective,
                                             std::span<const double> theta,
                                             const Simulator &sim) {
  check_theta(a, theta);
  const auto prog = a.instructions();
  const auto occ = a.occurrences();
  const std::size_t n_occ = occ.size();
  std::vector<double> grad(theta.size(), 0.0);
  if (n_occ == 0)
    return grad;

  const std::size_t state_bytes = (std::size_t{1} << a.num_qubits()) * sizeof(cplx);
  const bool snapshots = n_occ * state_bytes <= kSnapshotBudgetBytes;
  std::vector<StateVector> before;
  if (snapshots) {
    before.reserve(n_occ);
    auto s = StateVector::zero(a.num_qubits());
    std::size_t k = 0;
    for (std::size_t o = 0; o < n_occ; ++o) {
      run_range(sim, s, prog.subspan(0, occ[o]), k, theta);
      k = occ[o];
      before.push_back(s);
    }
  }

  // Parallelize across occurrences when there are enough of them to keep
  // every worker busy; otherwise inside each kernel.
  const bool outer = sim.threads() > 1 && n_occ >= static_cast<std::size_t>(sim.threads());
  const Simulator serial(1);
  const Simulator &inner = outer ? serial : sim;
  std::vector<double> diff(n_occ, 0.0);
  std::exception_ptr failure;
  const auto n_items = static_cast<std::int64_t>(n_occ);
#pragma omp parallel for num_threads(sim.threads()) schedule(dynamic) if (outer)
  for (std::int64_t oi = 0; oi < n_items; ++oi) {
    try {
      const auto o = static_cast<std::size_t>(oi);
      const auto &ins = prog[occ[o]];
      const double base = angle_of(ins, theta);
      double value[2];
      for (int side = 0; side < 2; ++side) {
        const double shift = side == 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2;
        StateVector s = snapshots ? before[o] : StateVector::zero(a.num_qubits());
        if (!snapshots)
          run_range(inner, s, prog.subspan(0, occ[o]), 0, theta);
        apply_instruction(inner, s, ins, base + shift);
        run_range(inner, s, prog, occ[o] + 1, theta);
        value[side] = objective(s);
      }
      diff[o] = 0.5 * (value[0] - value[1]) * ins.scale;
    } catch (...) {
#pragma omp critical(vqm_shift_failure)
      if (!failure)
        failure = std::current_exception();
    }
  }
  if (failure)
    std::rethrow_exception(failure);
  for (std::size_t o = 0; o < n_occ; ++o)
    grad[static_cast<std::size_t>(prog[occ[o]].param)] += diff[o];
  return grad;
}

std::vector<double> parameter_shift_gradient(const AnsatzProgram &a, const PauliSum &h,
                                             std::span<const double> theta,
                                             const Simulator &sim) {
  if (h.num_qubits() != a.num_qubits())
    fail(ErrorKind::Shape, "Hamiltonian and ansatz sizes differ");
  return parameter_shift_gradient(
      a, [&](const StateVector &s) { return sim.expectation(h, s); }, theta, sim);
}

} // namespace vqm
