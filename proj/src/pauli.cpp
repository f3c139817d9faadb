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

#include "vqm/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vqm/error.hpp"

namespace vqm {

namespace {

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
  case 0:
    return {1.0, 0.0};
  case 1:
    return {0.0, 1.0};
  case 2:
    return {-1.0, 0.0};
  default:
    return {0.0, -1.0};
  }
}

void check_dense_cap(int n, int cap) {
  if (n > cap)
    fail(ErrorKind::Size, "dense matrix requested for " + std::to_string(n) +
                              " qubits exceeds cap of " + std::to_string(cap));
}

int qubits_for_dim(std::size_t dim) {
  if (dim < 2 || !std::has_single_bit(dim))
    fail(ErrorKind::Shape, "matrix dimension " + std::to_string(dim) +
                               " is not a power of two >= 2");
  return std::countr_zero(dim);
}

// In-place unnormalized Walsh-Hadamard transform:
// out[z] = sum_r (-1)^{popcount(r & z)} in[r].
template <class T> void walsh_hadamard(std::vector<T> &v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const T a = v[j];
        const T b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

} // namespace

DenseMatrix DenseMatrix::identity(std::size_t dim) {
  DenseMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    m(i, i) = 1.0;
  return m;
}

double DenseMatrix::hermiticity_deviation() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

double DenseMatrix::max_abs_diff(const DenseMatrix &a, const DenseMatrix &b) {
  require(a.dim() == b.dim(), ErrorKind::Shape, "matrix dimensions differ");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data_.size(); ++k)
    worst = std::max(worst, std::abs(a.data_[k] - b.data_[k]));
  return worst;
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(int n_qubits) : PauliString(n_qubits, 0, 0) {}

PauliString::PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_(n_qubits), x_(x_mask), z_(z_mask) {
  require(n_qubits >= 1 && n_qubits <= kMaxPauliQubits, ErrorKind::Size,
          "Pauli string qubit count must be in [1, 64]");
  require(((x_ | z_) & ~low_mask(n_)) == 0, ErrorKind::Index,
          "Pauli string mask addresses qubits beyond " + std::to_string(n_));
}

PauliString PauliString::parse(std::string_view letters) {
  require(!letters.empty() && letters.size() <= kMaxPauliQubits,
          ErrorKind::Validation, "Pauli string must have 1..64 letters");
  std::uint64_t x = 0, z = 0;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (letters[q]) {
    case 'I':
      break;
    case 'X':
      x |= bit;
      break;
    case 'Y':
      x |= bit;
      z |= bit;
      break;
    case 'Z':
      z |= bit;
      break;
    default:
      fail(ErrorKind::Validation,
           std::string("invalid Pauli letter '") + letters[q] + "'");
    }
  }
  return PauliString(static_cast<int>(letters.size()), x, z);
}

PauliString PauliString::single(int n_qubits, int qubit, char letter) {
  require(qubit >= 0 && qubit < n_qubits, ErrorKind::Index,
          "qubit index out of range");
  std::string s(n_qubits, 'I');
  s[qubit] = letter;
  return parse(s);
}

char PauliString::letter(int qubit) const {
  require(qubit >= 0 && qubit < n_, ErrorKind::Index, "qubit index out of range");
  const bool xb = (x_ >> qubit) & 1U;
  const bool zb = (z_ >> qubit) & 1U;
  if (xb && zb)
    return 'Y';
  if (xb)
    return 'X';
  return zb ? 'Z' : 'I';
}

std::string PauliString::to_string() const {
  std::string s(n_, 'I');
  for (int q = 0; q < n_; ++q)
    s[q] = letter(q);
  return s;
}

int PauliString::num_y() const noexcept { return std::popcount(x_ & z_); }

cplx PauliString::phase(std::uint64_t basis_index) const noexcept {
  const int sign_flips = std::popcount(basis_index & z_);
  cplx ph = i_power(num_y());
  return (sign_flips & 1) ? -ph : ph;
}

std::pair<cplx, PauliString> PauliString::multiply(const PauliString &other) const {
  require(n_ == other.n_, ErrorKind::Shape, "Pauli string sizes differ");
  // P = i^{|x&z|} X^x Z^z; Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
  const std::uint64_t x = x_ ^ other.x_;
  const std::uint64_t z = z_ ^ other.z_;
  const int y_out = std::popcount(x & z);
  int k = num_y() + other.num_y() - y_out;
  if (std::popcount(z_ & other.x_) & 1)
    k += 2;
  return {i_power(k), PauliString(n_, x, z)};
}

// ---------------------------------------------------------------------------
// PauliSum

PauliSum::PauliSum(int n_qubits) : n_(n_qubits) {
  require(n_qubits >= 1 && n_qubits <= kMaxPauliQubits, ErrorKind::Size,
          "Pauli sum qubit count must be in [1, 64]");
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms) : PauliSum(n_qubits) {
  for (const auto &t : terms) {
    require(t.string.num_qubits() == n_qubits, ErrorKind::Shape,
            "term " + t.string.to_string() + " does not act on " +
                std::to_string(n_qubits) + " qubits");
    require(std::isfinite(t.coeff), ErrorKind::Validation,
            "non-finite coefficient on " + t.string.to_string());
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const PauliTerm &a, const PauliTerm &b) {
                     return a.string < b.string;
                   });
  for (auto &t : terms) {
    if (!terms_.empty() && terms_.back().string == t.string)
      terms_.back().coeff += t.coeff;
    else
      terms_.push_back(t);
  }
  std::erase_if(terms_, [](const PauliTerm &t) { return t.coeff == 0.0; });
}

double PauliSum::coefficient(const PauliString &p) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), p,
      [](const PauliTerm &t, const PauliString &s) { return t.string < s; });
  return (it != terms_.end() && it->string == p) ? it->coeff : 0.0;
}

PauliSum PauliSum::scaled(double factor) const {
  std::vector<PauliTerm> out(terms_.begin(), terms_.end());
  for (auto &t : out)
    t.coeff *= factor;
  return PauliSum(n_, std::move(out));
}

PauliSum PauliSum::plus(const PauliSum &other) const {
  require(n_ == other.n_, ErrorKind::Shape, "Pauli sum sizes differ");
  std::vector<PauliTerm> all(terms_.begin(), terms_.end());
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return PauliSum(n_, std::move(all));
}

// ---------------------------------------------------------------------------
// Dense realization and decomposition

DenseMatrix pauli_matrix(const PauliString &p, int cap) {
  check_dense_cap(p.num_qubits(), cap);
  const std::size_t dim = std::size_t{1} << p.num_qubits();
  DenseMatrix m(dim);
  for (std::size_t c = 0; c < dim; ++c)
    m(c ^ p.x_mask(), c) = p.phase(c);
  return m;
}

DenseMatrix pauli_sum_matrix(const PauliSum &h, int cap) {
  check_dense_cap(h.num_qubits(), cap);
  const std::size_t dim = std::size_t{1} << h.num_qubits();
  DenseMatrix m(dim);
  for (const auto &t : h.terms())
    for (std::size_t c = 0; c < dim; ++c)
      m(c ^ t.string.x_mask(), c) += t.coeff * t.string.phase(c);
  return m;
}

PauliSum decompose_hermitian(const DenseMatrix &m, const DecomposeOptions &opts) {
  const int n = qubits_for_dim(m.dim());
  check_dense_cap(n, opts.cap);
  const double dev = m.hermiticity_deviation();
  if (dev > opts.hermiticity_tol)
    fail(ErrorKind::Validation,
         "matrix is not Hermitian (max deviation " + std::to_string(dev) + ")");

  const std::size_t dim = m.dim();
  const double norm = 1.0 / static_cast<double>(dim);
  std::vector<PauliTerm> terms;
  std::vector<cplx> band(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    // Tr(P M) = i^{|x&z|} sum_r (-1)^{|r&z|} M(r, r^x), using the
    // Hermitian part so tiny input asymmetry cannot leak into Im(alpha).
    bool any = false;
    for (std::size_t r = 0; r < dim; ++r) {
      band[r] = 0.5 * (m(r, r ^ x) + std::conj(m(r ^ x, r)));
      any = any || band[r] != cplx{};
    }
    if (!any)
      continue;
    walsh_hadamard(band);
    for (std::uint64_t z = 0; z < dim; ++z) {
      const PauliString p(n, x, z);
      const cplx alpha = i_power(p.num_y()) * band[z] * norm;
      if (std::abs(alpha.imag()) > opts.imag_tol)
        fail(ErrorKind::Numerical, "imaginary Pauli coefficient " +
                                       std::to_string(alpha.imag()) + " on " +
                                       p.to_string());
      if (std::abs(alpha.real()) >= opts.drop_tol)
        terms.push_back({alpha.real(), p});
    }
  }
  return PauliSum(n, std::move(terms));
}

PauliSum decompose_diagonal(std::span<const double> diagonal, double drop_tol) {
  const int n = qubits_for_dim(diagonal.size());
  std::vector<double> coeffs(diagonal.begin(), diagonal.end());
  walsh_hadamard(coeffs);
  const double norm = 1.0 / static_cast<double>(diagonal.size());
  std::vector<PauliTerm> terms;
  for (std::uint64_t z = 0; z < coeffs.size(); ++z) {
    const double a = coeffs[z] * norm;
    if (std::abs(a) >= drop_tol)
      terms.push_back({a, PauliString(n, 0, z)});
  }
  return PauliSum(n, std::move(terms));
}

// ---------------------------------------------------------------------------
// Text format

std::string format_pauli_sum(const PauliSum &h) {
  std::ostringstream out;
  out << "qubits " << h.num_qubits() << "\n";
  char buf[64];
  for (const auto &t : h.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.coeff);
    out << buf << ' ' << t.string.to_string() << "\n";
  }
  return out.str();
}

PauliSum parse_pauli_sum(std::string_view text, const std::string &source) {
  int n = 0;
  std::vector<PauliTerm> terms;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#')
      continue;
    std::istringstream fields(line.substr(first));
    std::string a, b, extra;
    fields >> a >> b;
    if (b.empty() || (fields >> extra))
      throw ParseError(source, line_no, "expected two fields, got '" + line + "'");
    if (a == "qubits") {
      if (n != 0)
        throw ParseError(source, line_no, "duplicate qubits header");
      int value = 0;
      auto [ptr, ec] = std::from_chars(b.data(), b.data() + b.size(), value);
      if (ec != std::errc{} || ptr != b.data() + b.size() || value < 1 ||
          value > kMaxPauliQubits)
        throw ParseError(source, line_no, "invalid qubit count '" + b + "'");
      n = value;
      continue;
    }
    if (n == 0)
      throw ParseError(source, line_no, "term before 'qubits <n>' header");
    double coeff = 0.0;
    try {
      std::size_t used = 0;
      coeff = std::stod(a, &used);
      if (used != a.size())
        throw std::invalid_argument(a);
    } catch (const std::exception &) {
      throw ParseError(source, line_no, "invalid coefficient '" + a + "'");
    }
    if (!std::isfinite(coeff))
      throw ParseError(source, line_no, "non-finite coefficient '" + a + "'");
    if (b.find_first_not_of("IXYZ") != std::string::npos)
      throw ParseError(source, line_no, "invalid Pauli letters '" + b + "'");
    if (static_cast<int>(b.size()) != n)
      fail(ErrorKind::Validation,
           source + ":" + std::to_string(line_no) + ": letter string '" + b +
               "' has length " + std::to_string(b.size()) + ", expected " +
               std::to_string(n));
    terms.push_back({coeff, PauliString::parse(b)});
  }
  if (n == 0)
    throw ParseError(source, 0, "missing 'qubits <n>' header");
  return PauliSum(n, std::move(terms));
}

} // namespace vqm
