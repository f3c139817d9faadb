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

#include "vqm/hamiltonians.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "vqm/error.hpp"
#include "vqm/fermion.hpp"
#include "vqm/statevector.hpp"

namespace vqm {

// ---------------------------------------------------------------------------
// Harmonic oscillator

std::vector<double> sho_number_diagonal(std::size_t levels) {
  std::vector<double> n(levels);
  for (std::size_t j = 0; j < levels; ++j)
    n[j] = static_cast<double>(j);
  return n;
}

PauliSum build_sho(const ShoSpec &spec) {
  require(spec.omega > 0.0 && std::isfinite(spec.omega), ErrorKind::Argument,
          "oscillator frequency must be positive");
  require(spec.n_qubits >= 1 && spec.n_qubits <= kSimulatorQubitCap,
          ErrorKind::Size, "oscillator register must have 1.." +
                               std::to_string(kSimulatorQubitCap) + " qubits");
  auto diag = sho_number_diagonal(std::size_t{1} << spec.n_qubits);
  for (auto &d : diag)
    d = spec.omega * (d + 0.5);
  return decompose_diagonal(diag);
}

// ---------------------------------------------------------------------------
// Integrals

FermionIntegrals::FermionIntegrals(int n_spin_orbitals)
    : n_(n_spin_orbitals),
      h1_(static_cast<std::size_t>(n_spin_orbitals) * n_spin_orbitals, 0.0),
      h2_(static_cast<std::size_t>(n_spin_orbitals) * n_spin_orbitals *
              n_spin_orbitals * n_spin_orbitals,
          0.0) {
  require(n_spin_orbitals >= 1 && n_spin_orbitals <= kMaxPauliQubits,
          ErrorKind::Size, "spin-orbital count must be in [1, 64]");
}

double FermionIntegrals::symmetry_violation() const {
  double worst = 0.0;
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      worst = std::max(worst, std::abs(one_body(p, q) - one_body(q, p)));
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s) {
          const double v = two_body(p, q, r, s);
          worst = std::max({worst, std::abs(v - two_body(q, p, r, s)),
                            std::abs(v - two_body(p, q, s, r)),
                            std::abs(v - two_body(r, s, p, q))});
        }
  return worst;
}

namespace {

constexpr double kDuplicateTol = 1e-8;

std::string upper(std::string s) {
  for (auto &c : s)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

struct SpatialTables {
  int norb = 0;
  std::vector<double> h1;
  std::vector<char> h1_set;
  std::vector<double> h2;
  std::vector<char> h2_set;

  explicit SpatialTables(int n)
      : norb(n), h1(n * n, 0.0), h1_set(n * n, 0), h2(n * n * n * n, 0.0),
        h2_set(n * n * n * n, 0) {}
};

} // namespace

FermionIntegrals parse_fcidump(std::string_view text, TwoBodyOrder order,
                               const std::string &source) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;

  // Header: gather everything from &FCI through &END or '/'.
  std::string header;
  bool started = false;
  bool header_done = false;
  while (!header_done && std::getline(in, line)) {
    ++line_no;
    const std::string u = upper(line);
    if (!started) {
      const auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos)
          continue;
        throw ParseError(source, line_no, "expected '&FCI' header");
      }
      started = true;
      header += u.substr(pos + 4) + " ";
    } else {
      header += u + " ";
    }
    const auto end_pos = header.find("&END");
    const auto slash = header.find('/');
    if (end_pos != std::string::npos || slash != std::string::npos) {
      header = header.substr(0, std::min(end_pos, slash));
      header_done = true;
    }
  }
  if (!header_done)
    throw ParseError(source, line_no, "unterminated FCIDUMP header");

  // KEY=value[,value...] entries; only NORB and NELEC are needed.
  for (auto &c : header)
    if (c == ',' || c == '\t' || c == '\r')
      c = ' ';
  int norb = -1, nelec = -1;
  {
    std::istringstream hs(header);
    std::string tok, key;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      std::string value;
      if (eq != std::string::npos) {
        key = tok.substr(0, eq);
        value = tok.substr(eq + 1);
        if (value.empty() && !(hs >> value))
          break;
      } else {
        value = tok;
      }
      try {
        if (key == "NORB" && norb < 0)
          norb = std::stoi(value);
        else if (key == "NELEC" && nelec < 0)
          nelec = std::stoi(value);
      } catch (const std::exception &) {
        throw ParseError(source, line_no, "invalid " + key + " value '" + value + "'");
      }
    }
  }
  if (norb < 1)
    throw ParseError(source, line_no, "header lacks a positive NORB");
  if (nelec < 0)
    throw ParseError(source, line_no, "header lacks NELEC");
  if (2 * norb > kMaxPauliQubits)
    fail(ErrorKind::Size, "NORB too large for qubit mapping");

  SpatialTables t(norb);
  double core = 0.0;
  bool core_set = false;

  auto assign = [&](double &slot, char &flag, double v, std::size_t ln) {
    if (flag && std::abs(slot - v) > kDuplicateTol)
      fail(ErrorKind::Validation,
           source + ":" + std::to_string(ln) +
               ": integral conflicts with a symmetry-equivalent element (" +
               std::to_string(slot) + " vs " + std::to_string(v) + ")");
    slot = v;
    flag = 1;
  };
  auto i2 = [norb](int p, int q) { return static_cast<std::size_t>(p * norb + q); };
  auto i4 = [norb](int p, int q, int r, int s) {
    return static_cast<std::size_t>(((p * norb + q) * norb + r) * norb + s);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (upper(line).find_first_not_of(" \t\r") == std::string::npos)
      continue;
    for (auto &c : line)
      if (c == 'D' || c == 'd')
        c = 'e'; // Fortran exponent
    std::istringstream fields(line);
    double v;
    long i, j, k, l;
    std::string extra;
    if (!(fields >> v >> i >> j >> k >> l) || (fields >> extra))
      throw ParseError(source, line_no, "expected 'value i j k l', got '" + line + "'");
    if (!std::isfinite(v))
      throw ParseError(source, line_no, "non-finite integral value");
    for (long idx : {i, j, k, l})
      if (idx < 0 || idx > norb)
        throw ParseError(source, line_no,
                         "orbital index " + std::to_string(idx) + " outside 0.." +
                             std::to_string(norb));
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (core_set && std::abs(core - v) > kDuplicateTol)
        fail(ErrorKind::Validation,
             source + ":" + std::to_string(line_no) + ": conflicting core energy");
      core = v;
      core_set = true;
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // orbital energy; not part of the Hamiltonian
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const int p = static_cast<int>(i - 1), q = static_cast<int>(j - 1);
      assign(t.h1[i2(p, q)], t.h1_set[i2(p, q)], v, line_no);
      assign(t.h1[i2(q, p)], t.h1_set[i2(q, p)], v, line_no);
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      int p = static_cast<int>(i - 1), q = static_cast<int>(j - 1);
      int r = static_cast<int>(k - 1), s = static_cast<int>(l - 1);
      if (order == TwoBodyOrder::Physicist) {
        // <pq|rs> = (pr|qs)
        std::swap(q, r);
      }
      const std::array<std::array<int, 4>, 8> perms{{{p, q, r, s},
                                                     {q, p, r, s},
                                                     {p, q, s, r},
                                                     {q, p, s, r},
                                                     {r, s, p, q},
                                                     {s, r, p, q},
                                                     {r, s, q, p},
                                                     {s, r, q, p}}};
      for (const auto &a : perms) {
        const auto at = i4(a[0], a[1], a[2], a[3]);
        assign(t.h2[at], t.h2_set[at], v, line_no);
      }
    } else {
      throw ParseError(source, line_no, "unrecognized index pattern");
    }
  }

  FermionIntegrals f(2 * norb);
  f.set_num_electrons(nelec);
  f.set_core_energy(core);
  const int n = 2 * norb;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p % 2 == q % 2)
        f.one_body(p, q) = t.h1[i2(p / 2, q / 2)];
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p % 2 != q % 2)
        continue;
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          if (r % 2 == s % 2)
            f.two_body(p, q, r, s) = t.h2[i4(p / 2, q / 2, r / 2, s / 2)];
    }
  return f;
}

FermionIntegrals load_fcidump(const std::filesystem::path &path, TwoBodyOrder order) {
  return parse_fcidump(read_file(path), order, path.string());
}

// ---------------------------------------------------------------------------
// Jordan-Wigner

PauliSum jordan_wigner(const FermionIntegrals &f) {
  const int n = f.num_spin_orbitals();
  require(n >= 1, ErrorKind::Argument, "integrals have no spin-orbitals");
  const double violation = f.symmetry_violation();
  if (violation > 1e-10)
    fail(ErrorKind::Validation, "integrals violate permutational symmetry by " +
                                    std::to_string(violation));

  ComplexPauliSum acc(n);
  acc.add(f.core_energy(), PauliString(n));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double h = f.one_body(p, q);
      if (h == 0.0)
        continue;
      const std::array<LadderOp, 2> ops{{{p, true}, {q, false}}};
      acc.add_ladder_product(h, ops);
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double g = f.two_body(p, q, r, s);
          if (g == 0.0 || p == r || q == s)
            continue; // a+_p a+_p = 0, a_q a_q = 0
          const std::array<LadderOp, 4> ops{{{p, true}, {r, true}, {s, false}, {q, false}}};
          acc.add_ladder_product(0.5 * g, ops);
        }
  return acc.to_real(1e-10, 1e-14);
}

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    fail(ErrorKind::Io, "read failure on '" + path.string() + "'");
  return ss.str();
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      fail(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out)
      fail(ErrorKind::Io, "write failure on '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::Io, "cannot rename into '" + path.string() + "'");
  }
}

PauliSum load_pauli_sum(const std::filesystem::path &path) {
  return parse_pauli_sum(read_file(path), path.string());
}

void save_pauli_sum(const PauliSum &h, const std::filesystem::path &path) {
  write_file_atomic(path, format_pauli_sum(h));
}

} // namespace vqm
