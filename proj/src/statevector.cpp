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

#include "vqm/statevector.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vqm/error.hpp"

namespace vqm {

namespace {

using idx_t = std::int64_t;

// Spread k over the index space with a zero inserted at bit position q.
inline std::uint64_t insert_zero(std::uint64_t k, int q) {
  const std::uint64_t low = k & ((std::uint64_t{1} << q) - 1);
  return ((k >> q) << (q + 1)) | low;
}

void check_qubit(const StateVector &s, int q) {
  if (q < 0 || q >= s.num_qubits())
    fail(ErrorKind::Index, "qubit " + std::to_string(q) + " out of range for " +
                               std::to_string(s.num_qubits()) + "-qubit state");
}

void check_same(int a, int b, const char *what) {
  if (a != b)
    fail(ErrorKind::Shape, std::string(what) + ": qubit counts differ (" +
                               std::to_string(a) + " vs " + std::to_string(b) + ")");
}

void check_normalized(const StateVector &s, const char *what) {
  const double dev = std::abs(s.norm_sq() - 1.0);
  if (!std::isfinite(dev))
    fail(ErrorKind::Numerical, std::string(what) + ": state has non-finite amplitudes");
  if (dev > 1e-10)
    fail(ErrorKind::Validation,
         std::string(what) + ": state is not normalized (|norm^2 - 1| = " +
             std::to_string(dev) + ")");
}

std::size_t num_chunks(std::size_t dim) {
  return (dim + Simulator::kChunk - 1) / Simulator::kChunk;
}

} // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::zero(int n_qubits) { return basis(n_qubits, 0); }

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  if (n_qubits < 1 || n_qubits > kSimulatorQubitCap)
    fail(ErrorKind::Size, "state of " + std::to_string(n_qubits) +
                              " qubits outside [1, " +
                              std::to_string(kSimulatorQubitCap) + "]");
  StateVector s;
  s.n_ = n_qubits;
  s.amp_.assign(std::size_t{1} << n_qubits, cplx{});
  if (index >= s.amp_.size())
    fail(ErrorKind::Index, "basis index out of range");
  s.amp_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || !std::has_single_bit(dim))
    fail(ErrorKind::Shape, "amplitude count " + std::to_string(dim) +
                               " is not a power of two >= 2");
  const int n = std::countr_zero(dim);
  if (n > kSimulatorQubitCap)
    fail(ErrorKind::Size, "state exceeds simulator cap");
  StateVector s;
  s.n_ = n;
  s.amp_ = std::move(amplitudes);
  return s;
}

double StateVector::norm_sq() const {
  double total = 0.0;
  for (std::size_t c = 0; c < num_chunks(amp_.size()); ++c) {
    double part = 0.0;
    const std::size_t end = std::min(amp_.size(), (c + 1) * Simulator::kChunk);
    for (std::size_t i = c * Simulator::kChunk; i < end; ++i)
      part += std::norm(amp_[i]);
    total += part;
  }
  return total;
}

void StateVector::write_csv(std::ostream &out) const {
  out << "index,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, amp_[i].real(),
                  amp_[i].imag());
    out << buf;
  }
}

StateVector zero_state(int n_qubits) { return StateVector::zero(n_qubits); }

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(int threads) : threads_(threads) {
  require(threads >= 1, ErrorKind::Argument, "thread count must be >= 1");
}

void Simulator::ry(StateVector &s, int qubit, double theta) const {
  check_qubit(s, qubit);
  const double c = std::cos(0.5 * theta);
  const double sn = std::sin(0.5 * theta);
  cplx *a = s.amplitudes().data();
  const std::uint64_t stride = std::uint64_t{1} << qubit;
  const idx_t half = static_cast<idx_t>(s.dim() / 2);
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(s.dim()))
  for (idx_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = insert_zero(static_cast<std::uint64_t>(k), qubit);
    const std::uint64_t i1 = i0 | stride;
    const cplx a0 = a[i0];
    const cplx a1 = a[i1];
    a[i0] = c * a0 - sn * a1;
    a[i1] = sn * a0 + c * a1;
  }
}

void Simulator::rz(StateVector &s, int qubit, double theta) const {
  check_qubit(s, qubit);
  const cplx p0 = std::polar(1.0, -0.5 * theta);
  const cplx p1 = std::polar(1.0, 0.5 * theta);
  cplx *a = s.amplitudes().data();
  const std::uint64_t stride = std::uint64_t{1} << qubit;
  const idx_t half = static_cast<idx_t>(s.dim() / 2);
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(s.dim()))
  for (idx_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = insert_zero(static_cast<std::uint64_t>(k), qubit);
    a[i0] *= p0;
    a[i0 | stride] *= p1;
  }
}

void Simulator::x(StateVector &s, int qubit) const {
  check_qubit(s, qubit);
  cplx *a = s.amplitudes().data();
  const std::uint64_t stride = std::uint64_t{1} << qubit;
  const idx_t half = static_cast<idx_t>(s.dim() / 2);
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(s.dim()))
  for (idx_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = insert_zero(static_cast<std::uint64_t>(k), qubit);
    std::swap(a[i0], a[i0 | stride]);
  }
}

void Simulator::cnot(StateVector &s, int control, int target) const {
  check_qubit(s, control);
  check_qubit(s, target);
  if (control == target)
    fail(ErrorKind::Argument, "CNOT control and target are both qubit " +
                                  std::to_string(control));
  cplx *a = s.amplitudes().data();
  const int lo = std::min(control, target);
  const int hi = std::max(control, target);
  const std::uint64_t cbit = std::uint64_t{1} << control;
  const std::uint64_t tbit = std::uint64_t{1} << target;
  const idx_t quarter = static_cast<idx_t>(s.dim() / 4);
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(s.dim()))
  for (idx_t k = 0; k < quarter; ++k) {
    const std::uint64_t base =
        insert_zero(insert_zero(static_cast<std::uint64_t>(k), lo), hi) | cbit;
    std::swap(a[base], a[base | tbit]);
  }
}

void Simulator::apply_pauli(StateVector &s, const PauliString &p) const {
  check_same(p.num_qubits(), s.num_qubits(), "apply_pauli");
  cplx *a = s.amplitudes().data();
  const std::uint64_t x = p.x_mask();
  const idx_t dim = static_cast<idx_t>(s.dim());
  if (x == 0) {
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(s.dim()))
    for (idx_t i = 0; i < dim; ++i)
      a[i] *= p.phase(static_cast<std::uint64_t>(i));
    return;
  }
  // Pair (i, i^x) where i has a 0 at the top bit of x.
  const int top = 63 - std::countl_zero(x);
  const idx_t half = dim / 2;
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(s.dim()))
  for (idx_t k = 0; k < half; ++k) {
    const std::uint64_t i = insert_zero(static_cast<std::uint64_t>(k), top);
    const std::uint64_t j = i ^ x;
    // (P psi)_j = phase(i) psi_i
    const cplx ai = a[i];
    const cplx aj = a[j];
    a[j] = p.phase(i) * ai;
    a[i] = p.phase(j) * aj;
  }
}

void Simulator::pauli_rotation(StateVector &s, const PauliString &p,
                               double theta) const {
  check_same(p.num_qubits(), s.num_qubits(), "pauli_rotation");
  const double c = std::cos(0.5 * theta);
  const cplx mis{0.0, -std::sin(0.5 * theta)}; // -i sin(theta/2)
  cplx *a = s.amplitudes().data();
  const std::uint64_t x = p.x_mask();
  const idx_t dim = static_cast<idx_t>(s.dim());
  if (x == 0) {
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(s.dim()))
    for (idx_t i = 0; i < dim; ++i)
      a[i] *= c + mis * p.phase(static_cast<std::uint64_t>(i));
    return;
  }
  const int top = 63 - std::countl_zero(x);
  const idx_t half = dim / 2;
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(s.dim()))
  for (idx_t k = 0; k < half; ++k) {
    const std::uint64_t i = insert_zero(static_cast<std::uint64_t>(k), top);
    const std::uint64_t j = i ^ x;
    const cplx ai = a[i];
    const cplx aj = a[j];
    a[i] = c * ai + mis * p.phase(j) * aj;
    a[j] = c * aj + mis * p.phase(i) * ai;
  }
}

double Simulator::expectation(const PauliSum &h, const StateVector &s) const {
  check_same(h.num_qubits(), s.num_qubits(), "expectation");
  check_normalized(s, "expectation");
  const auto terms = h.terms();
  if (terms.empty())
    return 0.0;
  const std::size_t dim = s.dim();
  const std::size_t chunks = num_chunks(dim);
  const cplx *a = s.amplitudes().data();

  // One partial sum per (term, chunk), reduced afterwards in a fixed order.
  std::vector<cplx> partial(terms.size() * chunks);
  const idx_t items = static_cast<idx_t>(partial.size());
  const bool par = threads_ > 1 && terms.size() * dim >= kParallelThreshold;
#pragma omp parallel for num_threads(threads_) schedule(static) if (par)
  for (idx_t item = 0; item < items; ++item) {
    const auto &p = terms[static_cast<std::size_t>(item) / chunks].string;
    const std::size_t chunk = static_cast<std::size_t>(item) % chunks;
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(dim, begin + kChunk);
    const std::uint64_t x = p.x_mask();
    const std::uint64_t z = p.z_mask();
    cplx acc{};
    if (x == 0) {
      double re = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const double w = std::norm(a[i]);
        re += (std::popcount(i & z) & 1) ? -w : w;
      }
      acc = re;
    } else {
      for (std::size_t i = begin; i < end; ++i) {
        const cplx v = std::conj(a[i ^ x]) * a[i];
        acc += (std::popcount(i & z) & 1) ? -v : v;
      }
    }
    partial[static_cast<std::size_t>(item)] = acc;
  }

  double energy = 0.0;
  double residue = 0.0;
  double weight = 0.0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    cplx sum{};
    for (std::size_t c = 0; c < chunks; ++c)
      sum += partial[t * chunks + c];
    // i^{nY} factor of the string phase
    switch (terms[t].string.num_y() & 3) {
    case 1:
      sum = cplx{-sum.imag(), sum.real()};
      break;
    case 2:
      sum = -sum;
      break;
    case 3:
      sum = cplx{sum.imag(), -sum.real()};
      break;
    default:
      break;
    }
    energy += terms[t].coeff * sum.real();
    residue += terms[t].coeff * sum.imag();
    weight += std::abs(terms[t].coeff);
  }
  if (std::abs(residue) > 1e-10 * std::max(1.0, weight))
    fail(ErrorKind::Numerical,
         "expectation has imaginary residue " + std::to_string(residue));
  return energy;
}

cplx Simulator::inner(const StateVector &a, const StateVector &b) const {
  check_same(a.num_qubits(), b.num_qubits(), "inner");
  const std::size_t dim = a.dim();
  const std::size_t chunks = num_chunks(dim);
  std::vector<cplx> partial(chunks);
  const cplx *pa = a.amplitudes().data();
  const cplx *pb = b.amplitudes().data();
#pragma omp parallel for num_threads(threads_) schedule(static) if (parallel_for(dim))
  for (idx_t c = 0; c < static_cast<idx_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(dim, begin + kChunk);
    cplx acc{};
    for (std::size_t i = begin; i < end; ++i)
      acc += std::conj(pa[i]) * pb[i];
    partial[static_cast<std::size_t>(c)] = acc;
  }
  cplx total{};
  for (const auto &p : partial)
    total += p;
  return total;
}

double Simulator::overlap_sq(const StateVector &a, const StateVector &b) const {
  check_same(a.num_qubits(), b.num_qubits(), "overlap_sq");
  check_normalized(a, "overlap_sq");
  check_normalized(b, "overlap_sq");
  return std::min(1.0, std::norm(inner(a, b)));
}

// ---------------------------------------------------------------------------
// Functional wrappers

StateVector apply_ry(StateVector s, int qubit, double theta) {
  Simulator{}.ry(s, qubit, theta);
  return s;
}

StateVector apply_rz(StateVector s, int qubit, double theta) {
  Simulator{}.rz(s, qubit, theta);
  return s;
}

StateVector apply_cnot(StateVector s, int control, int target) {
  Simulator{}.cnot(s, control, target);
  return s;
}

StateVector apply_pauli_rotation(StateVector s, const PauliString &p, double theta) {
  Simulator{}.pauli_rotation(s, p, theta);
  return s;
}

StateVector apply_pauli(const PauliString &p, StateVector s) {
  Simulator{}.apply_pauli(s, p);
  return s;
}

double expectation(const PauliSum &h, const StateVector &s) {
  return Simulator{}.expectation(h, s);
}

double overlap_sq(const StateVector &a, const StateVector &b) {
  return Simulator{}.overlap_sq(a, b);
}

} // namespace vqm
