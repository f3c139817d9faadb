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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vqm {

using cplx = std::complex<double>;

/// Largest qubit count for which dense 2^n x 2^n matrices are formed.
inline constexpr int kDenseQubitCap = 12;

/// Largest qubit count a PauliString can address (two 64-bit masks).
inline constexpr int kMaxPauliQubits = 64;

/// Square complex matrix, row-major.
///
/// Basis convention used across the library: qubit 0 is the least
/// significant bit of the computational-basis index.
class DenseMatrix {
public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static DenseMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  cplx &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx &operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }
  std::span<const cplx> data() const noexcept { return data_; }

  /// max_{r,c} |M(r,c) - conj(M(c,r))|
  double hermiticity_deviation() const;
  /// max_{r,c} |A(r,c) - B(r,c)|
  static double max_abs_diff(const DenseMatrix &a, const DenseMatrix &b);

private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// Tensor product of single-qubit Paulis, stored as X and Z bitmasks.
///
/// Letter on qubit q: I (x=0,z=0), X (1,0), Z (0,1), Y (1,1). Textual
/// form lists letters for qubit 0 first, so "XZ" is X on qubit 0 and Z on
/// qubit 1 (matrix kron(Z, X)).
class PauliString {
public:
  PauliString() = default;
  /// Identity string on n qubits.
  explicit PauliString(int n_qubits);
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  static PauliString parse(std::string_view letters);
  /// Single non-identity letter on one qubit.
  static PauliString single(int n_qubits, int qubit, char letter);

  int num_qubits() const noexcept { return n_; }
  std::uint64_t x_mask() const noexcept { return x_; }
  std::uint64_t z_mask() const noexcept { return z_; }
  char letter(int qubit) const;
  std::string to_string() const;
  bool is_identity() const noexcept { return x_ == 0 && z_ == 0; }
  bool is_diagonal() const noexcept { return x_ == 0; }
  int num_y() const noexcept;

  /// P|i> = phase(i) |i ^ x_mask>.
  cplx phase(std::uint64_t basis_index) const noexcept;

  /// Product this * other = factor * result, factor in {1, i, -1, -i}.
  std::pair<cplx, PauliString> multiply(const PauliString &other) const;

  friend bool operator==(const PauliString &, const PauliString &) = default;
  friend bool operator<(const PauliString &a, const PauliString &b) {
    return a.x_ != b.x_ ? a.x_ < b.x_ : a.z_ < b.z_;
  }

private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;

  friend bool operator==(const PauliTerm &, const PauliTerm &) = default;
};

/// Real-weighted sum of Pauli strings in canonical form: strings sorted
/// by (x_mask, z_mask) with no duplicates.
class PauliSum {
public:
  PauliSum() = default;
  /// Zero operator on n qubits.
  explicit PauliSum(int n_qubits);
  /// Merges duplicate strings; exact zeros produced by merging are kept
  /// out of the term list.
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  int num_qubits() const noexcept { return n_; }
  std::span<const PauliTerm> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Coefficient of the given string, 0 when absent.
  double coefficient(const PauliString &p) const;

  PauliSum scaled(double factor) const;
  PauliSum plus(const PauliSum &other) const;

  friend bool operator==(const PauliSum &, const PauliSum &) = default;

private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

DenseMatrix pauli_matrix(const PauliString &p, int cap = kDenseQubitCap);

/// sum_j w_j * pauli_matrix(P_j)
DenseMatrix pauli_sum_matrix(const PauliSum &h, int cap = kDenseQubitCap);

struct DecomposeOptions {
  double hermiticity_tol = 1e-10;
  double drop_tol = 1e-12;
  double imag_tol = 1e-12;
  int cap = kDenseQubitCap;
};

/// Coefficients Tr(P_k M) / 2^n over all 4^n strings, computed one X-mask
/// at a time with a Walsh-Hadamard transform over the Z-masks. X-masks whose
/// off-diagonal band is identically zero are skipped, so diagonal input
/// only scans the 2^n Z strings.
PauliSum decompose_hermitian(const DenseMatrix &m, const DecomposeOptions &opts = {});

/// Diagonal-only decomposition of diag(d); d.size() must be a power of two.
/// Works beyond the dense cap since no matrix is formed.
PauliSum decompose_diagonal(std::span<const double> diagonal,
                            double drop_tol = 1e-12);

/// Pauli-sum text format:
///   # comment
///   qubits <n>
///   <coefficient> <letters>
std::string format_pauli_sum(const PauliSum &h);
PauliSum parse_pauli_sum(std::string_view text,
                         const std::string &source = "<string>");

} // namespace vqm
