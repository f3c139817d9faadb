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

#include <vector>

#include "vqm/pauli.hpp"

namespace vqm {

/// Eigen-decomposition of a Hermitian matrix.
struct Spectrum {
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Column j is the eigenvector of eigenvalues[j]; empty when not retained.
  DenseMatrix eigenvectors;

  bool has_vectors() const noexcept { return eigenvectors.dim() != 0; }
};

/// Dense Hermitian eigensolver: Householder reduction to a complex
/// tridiagonal form, a diagonal phase similarity making it real, then
/// implicit-shift QL. Dimension limited to 2^kDenseQubitCap.
Spectrum eigen_hermitian(const DenseMatrix &m, bool with_vectors = true);

/// Smallest eigenvalue of h. Diagonal sums skip the dense solve and are
/// accepted up to the simulator cap.
double ground_energy(const PauliSum &h);

/// All eigenvalues of h, ascending.
std::vector<double> eigenvalues(const PauliSum &h);

} // namespace vqm
