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

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqm/vqm.h"

namespace vqm_cli {

/// Failure of a library call, carrying its status code.
class ApiError : public std::runtime_error {
public:
  ApiError(vqm_status status, const std::string &message)
      : std::runtime_error(message), status_(status) {}
  vqm_status status() const noexcept { return status_; }

private:
  vqm_status status_;
};

inline void check(vqm_status status) {
  if (status != VQM_OK) {
    std::string msg = vqm_last_error();
    if (msg.empty())
      msg = vqm_status_string(status);
    throw ApiError(status, msg);
  }
}

template <class T, void (*Destroy)(T *)> struct Deleter {
  void operator()(T *p) const noexcept { Destroy(p); }
};

using Context = std::unique_ptr<vqm_context, Deleter<vqm_context, vqm_context_destroy>>;
using PauliSum = std::unique_ptr<vqm_pauli_sum, Deleter<vqm_pauli_sum, vqm_pauli_sum_destroy>>;
using Ansatz = std::unique_ptr<vqm_ansatz, Deleter<vqm_ansatz, vqm_ansatz_destroy>>;
using State = std::unique_ptr<vqm_state, Deleter<vqm_state, vqm_state_destroy>>;
using Run = std::unique_ptr<vqm_run, Deleter<vqm_run, vqm_run_destroy>>;
using Meta = std::unique_ptr<vqm_meta, Deleter<vqm_meta, vqm_meta_destroy>>;

inline Context make_context(int threads) {
  vqm_context *p = nullptr;
  check(vqm_context_create(threads, &p));
  return Context(p);
}

inline int num_qubits(const vqm_pauli_sum *h) {
  int n = 0;
  check(vqm_pauli_sum_num_qubits(h, &n));
  return n;
}

inline int num_params(const vqm_ansatz *a) {
  int n = 0;
  check(vqm_ansatz_num_params(a, &n));
  return n;
}

template <class F> std::string read_text(F &&call) {
  size_t needed = 0;
  check(call(nullptr, 0, &needed));
  std::string out(needed, '\0');
  check(call(out.data(), out.size(), &needed));
  out.resize(needed > 0 ? needed - 1 : 0);
  return out;
}

template <class F> std::vector<double> read_values(F &&call) {
  size_t needed = 0;
  check(call(nullptr, 0, &needed));
  std::vector<double> out(needed);
  check(call(out.data(), out.size(), &needed));
  return out;
}

/// Run record plus the values the CLI reports.
struct RunResult {
  Run run;
  double final_energy = 0.0;
  double final_overlap = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_time = 0.0;
  std::vector<double> final_theta;
  std::string csv;
  std::string summary;
};

inline RunResult collect(Run run) {
  RunResult r;
  const vqm_run *p = run.get();
  check(vqm_run_final_energy(p, &r.final_energy));
  check(vqm_run_final_overlap(p, &r.final_overlap));
  check(vqm_run_iterations(p, &r.iterations));
  int conv = 0;
  check(vqm_run_converged(p, &conv));
  r.converged = conv != 0;
  check(vqm_run_wall_time(p, &r.wall_time));
  r.final_theta = read_values(
      [&](double *out, size_t cap, size_t *n) { return vqm_run_final_theta(p, out, cap, n); });
  r.csv = read_text(
      [&](char *out, size_t cap, size_t *n) { return vqm_run_csv(p, out, cap, n); });
  r.summary = read_text(
      [&](char *out, size_t cap, size_t *n) { return vqm_run_summary_json(p, out, cap, n); });
  r.run = std::move(run);
  return r;
}

} // namespace vqm_cli
