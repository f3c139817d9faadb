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

#include "vqm/vqm.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "vqm/ansatz.hpp"
#include "vqm/error.hpp"
#include "vqm/exactdiag.hpp"
#include "vqm/hamiltonians.hpp"
#include "vqm/meta.hpp"
#include "vqm/optimize.hpp"
#include "vqm/pauli.hpp"
#include "vqm/statevector.hpp"

struct vqm_context {
  vqm::Simulator sim;
};

struct vqm_pauli_sum {
  vqm::PauliSum value;
};

struct vqm_ansatz {
  vqm::AnsatzProgram value;
};

struct vqm_state {
  vqm::StateVector value;
};

struct vqm_run {
  vqm::RunRecord value;
};

struct vqm_meta {
  vqm::MetaLearner value;
};

namespace {

thread_local std::string g_last_error;

vqm_status status_of(vqm::ErrorKind kind) {
  using vqm::ErrorKind;
  switch (kind) {
  case ErrorKind::Argument:
    return VQM_ERR_ARGUMENT;
  case ErrorKind::Size:
    return VQM_ERR_SIZE;
  case ErrorKind::Shape:
    return VQM_ERR_SHAPE;
  case ErrorKind::Index:
    return VQM_ERR_INDEX;
  case ErrorKind::Validation:
    return VQM_ERR_VALIDATION;
  case ErrorKind::Parse:
    return VQM_ERR_PARSE;
  case ErrorKind::Numerical:
    return VQM_ERR_NUMERICAL;
  case ErrorKind::Capacity:
    return VQM_ERR_CAPACITY;
  case ErrorKind::Io:
    return VQM_ERR_IO;
  case ErrorKind::Version:
    return VQM_ERR_VERSION;
  case ErrorKind::Training:
    return VQM_ERR_TRAINING;
  }
  return VQM_ERR_INTERNAL;
}

vqm_status set_error(vqm_status status, const std::string &message) {
  g_last_error = message;
  return status;
}

struct BufferTooSmall {};

template <class F> vqm_status guarded(F &&body) {
  try {
    g_last_error.clear();
    body();
    return VQM_OK;
  } catch (const vqm::Error &e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const BufferTooSmall &) {
    return set_error(VQM_ERR_BUFFER, "output buffer too small");
  } catch (const std::bad_alloc &) {
    return set_error(VQM_ERR_CAPACITY, "out of memory");
  } catch (const std::exception &e) {
    return set_error(VQM_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(VQM_ERR_INTERNAL, "unknown failure");
  }
}

void need(const void *p, const char *what) {
  if (p == nullptr)
    vqm::fail(vqm::ErrorKind::Argument, std::string(what) + " must not be NULL");
}

void copy_text(const std::string &text, char *buf, size_t cap, size_t *needed) {
  const size_t n = text.size() + 1;
  if (needed != nullptr)
    *needed = n;
  if (buf == nullptr)
    return;
  if (cap < n)
    throw BufferTooSmall{};
  std::memcpy(buf, text.c_str(), n);
}

void copy_values(std::span<const double> values, double *out, size_t cap, size_t *needed) {
  if (needed != nullptr)
    *needed = values.size();
  if (out == nullptr)
    return;
  if (cap < values.size())
    throw BufferTooSmall{};
  std::copy(values.begin(), values.end(), out);
}

vqm::OptimizerConfig to_cpp(const vqm_optimizer_config &c) {
  vqm::OptimizerConfig out;
  vqm::require(c.kind == VQM_OPT_ADAM || c.kind == VQM_OPT_SGD, vqm::ErrorKind::Argument,
               "unknown optimizer kind");
  out.kind = c.kind == VQM_OPT_ADAM ? vqm::OptimizerKind::Adam : vqm::OptimizerKind::SGD;
  out.learning_rate = c.learning_rate;
  out.beta1 = c.beta1;
  out.beta2 = c.beta2;
  out.epsilon = c.epsilon;
  out.max_iterations = c.max_iterations;
  out.tolerance = c.tolerance;
  out.theta_stride = c.theta_stride;
  return out;
}

vqm::InitKind init_kind(int k) {
  switch (k) {
  case VQM_INIT_ZERO:
    return vqm::InitKind::Zero;
  case VQM_INIT_RANDOM:
    return vqm::InitKind::Random;
  case VQM_INIT_META:
    return vqm::InitKind::Meta;
  }
  vqm::fail(vqm::ErrorKind::Argument, "unknown init kind " + std::to_string(k));
}

std::span<const double> params(const double *theta, size_t n) {
  if (n > 0)
    need(theta, "theta");
  return {theta, n};
}

template <class T> void destroy(T *p) { delete p; }

template <class F> vqm_status run_guarded(vqm_run **out, F &&body) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new vqm_run{body()};
  });
}

template <class F> vqm_status run_with_partial(vqm_run **out, F &&body) {
  std::optional<vqm::RunRecord> partial;
  const auto status = run_guarded(out, [&] {
    try {
      return body();
    } catch (const vqm::NumericalFailure &e) {
      partial = e.partial();
      throw;
    }
  });
  if (status == VQM_ERR_NUMERICAL && partial && out != nullptr) {
    try {
      *out = new vqm_run{std::move(*partial)};
    } catch (...) {
      *out = nullptr;
    }
  }
  return status;
}

} // namespace

extern "C" {

int vqm_abi_version(void) { return VQM_ABI_VERSION; }

const char *vqm_status_string(vqm_status status) {
  switch (status) {
  case VQM_OK:
    return "ok";
  case VQM_ERR_ARGUMENT:
    return "argument error";
  case VQM_ERR_SIZE:
    return "size error";
  case VQM_ERR_SHAPE:
    return "shape error";
  case VQM_ERR_INDEX:
    return "index error";
  case VQM_ERR_VALIDATION:
    return "validation error";
  case VQM_ERR_PARSE:
    return "parse error";
  case VQM_ERR_NUMERICAL:
    return "numerical failure";
  case VQM_ERR_CAPACITY:
    return "capacity error";
  case VQM_ERR_IO:
    return "I/O error";
  case VQM_ERR_VERSION:
    return "version error";
  case VQM_ERR_TRAINING:
    return "training failure";
  case VQM_ERR_BUFFER:
    return "buffer too small";
  case VQM_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

const char *vqm_last_error(void) { return g_last_error.c_str(); }

// ---------------------------------------------------------------------------
// Context

vqm_status vqm_context_create(int threads, vqm_context **out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    vqm::require(threads >= 1, vqm::ErrorKind::Argument, "thread count must be >= 1");
    *out = new vqm_context{vqm::Simulator(threads)};
  });
}

void vqm_context_destroy(vqm_context *ctx) { destroy(ctx); }

int vqm_context_threads(const vqm_context *ctx) {
  return ctx != nullptr ? ctx->sim.threads() : 0;
}

// ---------------------------------------------------------------------------
// Pauli sums

vqm_status vqm_pauli_sum_parse(const char *text, vqm_pauli_sum **out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = nullptr;
    *out = new vqm_pauli_sum{vqm::parse_pauli_sum(text)};
  });
}

vqm_status vqm_pauli_sum_load(const char *path, vqm_pauli_sum **out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new vqm_pauli_sum{vqm::load_pauli_sum(path)};
  });
}

vqm_status vqm_pauli_sum_save(const vqm_pauli_sum *h, const char *path) {
  return guarded([&] {
    need(h, "h");
    need(path, "path");
    vqm::save_pauli_sum(h->value, path);
  });
}

vqm_status vqm_pauli_sum_format(const vqm_pauli_sum *h, char *buf, size_t cap,
                                size_t *needed) {
  return guarded([&] {
    need(h, "h");
    copy_text(vqm::format_pauli_sum(h->value), buf, cap, needed);
  });
}

vqm_status vqm_pauli_sum_num_qubits(const vqm_pauli_sum *h, int *out) {
  return guarded([&] {
    need(h, "h");
    need(out, "out");
    *out = h->value.num_qubits();
  });
}

vqm_status vqm_pauli_sum_num_terms(const vqm_pauli_sum *h, size_t *out) {
  return guarded([&] {
    need(h, "h");
    need(out, "out");
    *out = h->value.size();
  });
}

void vqm_pauli_sum_destroy(vqm_pauli_sum *h) { destroy(h); }

vqm_status vqm_sho_create(double omega, int n_qubits, vqm_pauli_sum **out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new vqm_pauli_sum{vqm::build_sho({omega, n_qubits})};
  });
}

vqm_status vqm_fcidump_load(const char *path, int order, vqm_pauli_sum **out,
                            int *n_electrons) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    vqm::require(order == VQM_CHEMIST || order == VQM_PHYSICIST, vqm::ErrorKind::Argument,
                 "unknown two-body index order");
    const auto f = vqm::load_fcidump(path, order == VQM_CHEMIST
                                               ? vqm::TwoBodyOrder::Chemist
                                               : vqm::TwoBodyOrder::Physicist);
    auto h = vqm::jordan_wigner(f);
    if (n_electrons != nullptr)
      *n_electrons = f.num_electrons();
    *out = new vqm_pauli_sum{std::move(h)};
  });
}

vqm_status vqm_ground_energy(const vqm_pauli_sum *h, double *out) {
  return guarded([&] {
    need(h, "h");
    need(out, "out");
    *out = vqm::ground_energy(h->value);
  });
}

vqm_status vqm_eigenvalues(const vqm_pauli_sum *h, double *out, size_t cap,
                           size_t *needed) {
  return guarded([&] {
    need(h, "h");
    copy_values(vqm::eigenvalues(h->value), out, cap, needed);
  });
}

// ---------------------------------------------------------------------------
// Ansatz programs

vqm_status vqm_ansatz_hea(int n_qubits, int layers, vqm_ansatz **out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new vqm_ansatz{vqm::build_hea(n_qubits, layers)};
  });
}

vqm_status vqm_ansatz_uccsd(int n_spin_orbitals, int n_electrons, vqm_ansatz **out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new vqm_ansatz{vqm::build_uccsd(n_spin_orbitals, n_electrons).first};
  });
}

vqm_status vqm_ansatz_parse(const char *descriptor, vqm_ansatz **out) {
  return guarded([&] {
    need(descriptor, "descriptor");
    need(out, "out");
    *out = nullptr;
    *out = new vqm_ansatz{vqm::parse_ansatz_descriptor(descriptor)};
  });
}

vqm_status vqm_ansatz_descriptor(const vqm_ansatz *a, char *buf, size_t cap,
                                 size_t *needed) {
  return guarded([&] {
    need(a, "a");
    copy_text(a->value.descriptor(), buf, cap, needed);
  });
}

vqm_status vqm_ansatz_num_qubits(const vqm_ansatz *a, int *out) {
  return guarded([&] {
    need(a, "a");
    need(out, "out");
    *out = a->value.num_qubits();
  });
}

vqm_status vqm_ansatz_num_params(const vqm_ansatz *a, int *out) {
  return guarded([&] {
    need(a, "a");
    need(out, "out");
    *out = a->value.num_params();
  });
}

void vqm_ansatz_destroy(vqm_ansatz *a) { destroy(a); }

// ---------------------------------------------------------------------------
// States and observables

vqm_status vqm_state_prepare(const vqm_context *ctx, const vqm_ansatz *a,
                             const double *theta, size_t n_theta, vqm_state **out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(a, "a");
    need(out, "out");
    *out = nullptr;
    *out = new vqm_state{vqm::run_ansatz(a->value, params(theta, n_theta), ctx->sim)};
  });
}

vqm_status vqm_state_overlap_sq(const vqm_context *ctx, const vqm_state *a,
                                const vqm_state *b, double *out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = ctx->sim.overlap_sq(a->value, b->value);
  });
}

vqm_status vqm_state_amplitudes(const vqm_state *s, double *out, size_t cap,
                                size_t *needed) {
  return guarded([&] {
    need(s, "s");
    const auto amp = s->value.amplitudes();
    std::span<const double> flat(reinterpret_cast<const double *>(amp.data()),
                                 2 * amp.size());
    copy_values(flat, out, cap, needed);
  });
}

void vqm_state_destroy(vqm_state *s) { destroy(s); }

vqm_status vqm_energy(const vqm_context *ctx, const vqm_pauli_sum *h, const vqm_ansatz *a,
                      const double *theta, size_t n_theta, double *out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(h, "h");
    need(a, "a");
    need(out, "out");
    vqm::require(h->value.num_qubits() == a->value.num_qubits(), vqm::ErrorKind::Shape,
                 "Hamiltonian and ansatz sizes differ");
    *out = vqm::energy(a->value, h->value, params(theta, n_theta), ctx->sim);
  });
}

vqm_status vqm_gradient(const vqm_context *ctx, const vqm_pauli_sum *h, const vqm_ansatz *a,
                        const double *theta, size_t n_theta, double *grad) {
  return guarded([&] {
    need(ctx, "ctx");
    need(h, "h");
    need(a, "a");
    if (n_theta > 0)
      need(grad, "grad");
    vqm::require(h->value.num_qubits() == a->value.num_qubits(), vqm::ErrorKind::Shape,
                 "Hamiltonian and ansatz sizes differ");
    const auto g =
        vqm::parameter_shift_gradient(a->value, h->value, params(theta, n_theta), ctx->sim);
    std::copy(g.begin(), g.end(), grad);
  });
}

// ---------------------------------------------------------------------------
// Optimization

void vqm_optimizer_config_default(vqm_optimizer_config *cfg) {
  if (cfg == nullptr)
    return;
  const vqm::OptimizerConfig d;
  cfg->kind = VQM_OPT_ADAM;
  cfg->learning_rate = d.learning_rate;
  cfg->beta1 = d.beta1;
  cfg->beta2 = d.beta2;
  cfg->epsilon = d.epsilon;
  cfg->max_iterations = d.max_iterations;
  cfg->tolerance = d.tolerance;
  cfg->theta_stride = d.theta_stride;
}

vqm_status vqm_initial_parameters(int kind, size_t n, uint64_t seed, double scale,
                                  double *out) {
  return guarded([&] {
    if (n > 0)
      need(out, "out");
    const auto theta = vqm::initial_parameters(init_kind(kind), n, seed, scale);
    std::copy(theta.begin(), theta.end(), out);
  });
}

vqm_status vqm_run_vqe(const vqm_context *ctx, const vqm_pauli_sum *h, const vqm_ansatz *a,
                       const double *theta0, size_t n_theta, const vqm_optimizer_config *cfg,
                       vqm_run **out) {
  return run_with_partial(out, [&] {
    need(ctx, "ctx");
    need(h, "h");
    need(a, "a");
    need(cfg, "cfg");
    return vqm::run_vqe(h->value, a->value, params(theta0, n_theta), to_cpp(*cfg),
                        ctx->sim);
  });
}

vqm_status vqm_run_vqd(const vqm_context *ctx, const vqm_pauli_sum *h, const vqm_ansatz *a,
                       const double *theta0, size_t n_theta, const vqm_optimizer_config *cfg,
                       double beta, const vqm_state *const *references,
                       size_t n_references, vqm_run **out) {
  return run_with_partial(out, [&] {
    need(ctx, "ctx");
    need(h, "h");
    need(a, "a");
    need(cfg, "cfg");
    vqm::VqdConfig vqd;
    vqd.beta = beta;
    if (n_references > 0)
      need(references, "references");
    for (size_t i = 0; i < n_references; ++i) {
      need(references[i], "reference state");
      vqd.references.push_back(references[i]->value);
    }
    return vqm::run_vqd(h->value, a->value, params(theta0, n_theta), to_cpp(*cfg), vqd,
                        ctx->sim);
  });
}

vqm_status vqm_run_set_origin(vqm_run *run, int kind, uint64_t seed) {
  return guarded([&] {
    need(run, "run");
    run->value.init_kind = init_kind(kind);
    run->value.seed = seed;
  });
}

vqm_status vqm_run_iterations(const vqm_run *run, int *out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    *out = run->value.iterations;
  });
}

vqm_status vqm_run_converged(const vqm_run *run, int *out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    *out = run->value.converged ? 1 : 0;
  });
}

vqm_status vqm_run_final_energy(const vqm_run *run, double *out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    *out = run->value.final_energy;
  });
}

vqm_status vqm_run_final_overlap(const vqm_run *run, double *out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    *out = run->value.final_overlap;
  });
}

vqm_status vqm_run_wall_time(const vqm_run *run, double *seconds) {
  return guarded([&] {
    need(run, "run");
    need(seconds, "seconds");
    *seconds = run->value.wall_time;
  });
}

vqm_status vqm_run_energies(const vqm_run *run, double *out, size_t cap, size_t *needed) {
  return guarded([&] {
    need(run, "run");
    copy_values(run->value.energies, out, cap, needed);
  });
}

vqm_status vqm_run_final_theta(const vqm_run *run, double *out, size_t cap,
                               size_t *needed) {
  return guarded([&] {
    need(run, "run");
    copy_values(run->value.final_theta, out, cap, needed);
  });
}

vqm_status vqm_run_csv(const vqm_run *run, char *buf, size_t cap, size_t *needed) {
  return guarded([&] {
    need(run, "run");
    copy_text(run->value.to_csv(), buf, cap, needed);
  });
}

vqm_status vqm_run_summary_json(const vqm_run *run, char *buf, size_t cap,
                                size_t *needed) {
  return guarded([&] {
    need(run, "run");
    copy_text(run->value.summary_json(), buf, cap, needed);
  });
}

void vqm_run_destroy(vqm_run *run) { destroy(run); }

// ---------------------------------------------------------------------------
// Meta-learner

vqm_status vqm_meta_create(int d_max, int hidden_dim, uint64_t seed, vqm_meta **out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new vqm_meta{vqm::MetaLearner::initialized(d_max, hidden_dim, seed)};
  });
}

vqm_status vqm_meta_load(const char *path, vqm_meta **out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new vqm_meta{vqm::load_meta(path)};
  });
}

vqm_status vqm_meta_save(const vqm_meta *m, const char *path) {
  return guarded([&] {
    need(m, "m");
    need(path, "path");
    vqm::save_meta(m->value, path);
  });
}

vqm_status vqm_meta_dims(const vqm_meta *m, int *d_max, int *hidden_dim) {
  return guarded([&] {
    need(m, "m");
    if (d_max != nullptr)
      *d_max = m->value.d_max();
    if (hidden_dim != nullptr)
      *hidden_dim = m->value.hidden_dim();
  });
}

void vqm_meta_destroy(vqm_meta *m) { destroy(m); }

void vqm_meta_train_config_default(vqm_meta_train_config *cfg) {
  if (cfg == nullptr)
    return;
  const vqm::TrainConfig d;
  cfg->unroll_steps = d.unroll_steps;
  cfg->epochs = d.epochs;
  cfg->meta_learning_rate = d.meta_learning_rate;
  cfg->batch_size = d.batch_size;
  cfg->seed = d.seed;
  cfg->objective = VQM_META_ENERGY;
}

vqm_status vqm_meta_predict(const vqm_context *ctx, const vqm_meta *m,
                            const vqm_pauli_sum *h, const vqm_ansatz *a, int unroll_steps,
                            double *theta_out, int *energy_evaluations) {
  return guarded([&] {
    need(ctx, "ctx");
    need(m, "m");
    need(h, "h");
    need(a, "a");
    const vqm::MetaTask task{h->value, a->value, "", std::nullopt};
    if (task.num_params() > 0)
      need(theta_out, "theta_out");
    const auto p = vqm::predict_init(m->value, task, unroll_steps, ctx->sim);
    std::copy(p.theta.begin(), p.theta.end(), theta_out);
    if (energy_evaluations != nullptr)
      *energy_evaluations = p.energy_evaluations;
  });
}

vqm_status vqm_meta_train(const vqm_context *ctx, vqm_meta *m,
                          const vqm_pauli_sum *const *hamiltonians,
                          const vqm_ansatz *const *ansatze, size_t n_tasks,
                          const vqm_meta_train_config *cfg, double *loss_curve) {
  return guarded([&] {
    need(ctx, "ctx");
    need(m, "m");
    need(cfg, "cfg");
    if (n_tasks > 0) {
      need(hamiltonians, "hamiltonians");
      need(ansatze, "ansatze");
    }
    vqm::require(cfg->objective == VQM_META_ENERGY, vqm::ErrorKind::Argument,
                 "the C API trains with the energy objective only");
    std::vector<vqm::MetaTask> tasks;
    for (size_t i = 0; i < n_tasks; ++i) {
      need(hamiltonians[i], "hamiltonian");
      need(ansatze[i], "ansatz");
      tasks.push_back({hamiltonians[i]->value, ansatze[i]->value, "", std::nullopt});
    }
    vqm::TrainConfig tc;
    tc.unroll_steps = cfg->unroll_steps;
    tc.epochs = cfg->epochs;
    tc.meta_learning_rate = cfg->meta_learning_rate;
    tc.batch_size = cfg->batch_size;
    tc.seed = cfg->seed;
    auto result = vqm::train_meta(m->value, tasks, tc, ctx->sim);
    m->value = std::move(result.model);
    if (loss_curve != nullptr)
      std::copy(result.loss_curve.begin(), result.loss_curve.end(), loss_curve);
  });
}

} // extern "C"
