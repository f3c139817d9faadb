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

#ifndef VQM_VQM_H
#define VQM_VQM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(VQM_BUILDING_LIBRARY)
#define VQM_API __declspec(dllexport)
#else
#define VQM_API __declspec(dllimport)
#endif
#else
#define VQM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define VQM_ABI_VERSION 1

/* Status codes. Every fallible call returns one; VQM_OK is zero. */
typedef enum vqm_status {
  VQM_OK = 0,
  VQM_ERR_ARGUMENT = 1,
  VQM_ERR_SIZE = 2,
  VQM_ERR_SHAPE = 3,
  VQM_ERR_INDEX = 4,
  VQM_ERR_VALIDATION = 5,
  VQM_ERR_PARSE = 6,
  VQM_ERR_NUMERICAL = 7,
  VQM_ERR_CAPACITY = 8,
  VQM_ERR_IO = 9,
  VQM_ERR_VERSION = 10,
  VQM_ERR_TRAINING = 11,
  VQM_ERR_BUFFER = 12,
  VQM_ERR_INTERNAL = 13
} vqm_status;

typedef enum vqm_optimizer_kind { VQM_OPT_ADAM = 0, VQM_OPT_SGD = 1 } vqm_optimizer_kind;
typedef enum vqm_init_kind { VQM_INIT_ZERO = 0, VQM_INIT_RANDOM = 1, VQM_INIT_META = 2 } vqm_init_kind;
typedef enum vqm_two_body_order { VQM_CHEMIST = 0, VQM_PHYSICIST = 1 } vqm_two_body_order;
typedef enum vqm_meta_objective { VQM_META_ENERGY = 0, VQM_META_SUPERVISED = 1 } vqm_meta_objective;

/* Opaque handles. */
typedef struct vqm_context vqm_context;
typedef struct vqm_pauli_sum vqm_pauli_sum;
typedef struct vqm_ansatz vqm_ansatz;
typedef struct vqm_state vqm_state;
typedef struct vqm_run vqm_run;
typedef struct vqm_meta vqm_meta;

typedef struct vqm_optimizer_config {
  int kind; /* vqm_optimizer_kind */
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  int max_iterations;
  double tolerance;
  int theta_stride;
} vqm_optimizer_config;

typedef struct vqm_meta_train_config {
  int unroll_steps;
  int epochs;
  double meta_learning_rate;
  int batch_size;
  uint64_t seed;
  int objective; /* vqm_meta_objective */
} vqm_meta_train_config;

VQM_API int vqm_abi_version(void);
VQM_API const char *vqm_status_string(vqm_status status);
/* Message of the last failed call on this thread; "" when none. */
VQM_API const char *vqm_last_error(void);

/*
 * Text outputs use a two-call protocol: pass buf = NULL to learn the
 * required size (including the terminating NUL) through *needed, then call
 * again with a buffer of at least that size. A non-NULL buffer that is too
 * small yields VQM_ERR_BUFFER. Array outputs follow the same protocol with
 * element counts.
 */

/* Context: worker-thread count for simulator kernels and gradients. */
VQM_API vqm_status vqm_context_create(int threads, vqm_context **out);
VQM_API void vqm_context_destroy(vqm_context *ctx);
VQM_API int vqm_context_threads(const vqm_context *ctx);

/* Pauli sums. */
VQM_API vqm_status vqm_pauli_sum_parse(const char *text, vqm_pauli_sum **out);
VQM_API vqm_status vqm_pauli_sum_load(const char *path, vqm_pauli_sum **out);
VQM_API vqm_status vqm_pauli_sum_save(const vqm_pauli_sum *h, const char *path);
VQM_API vqm_status vqm_pauli_sum_format(const vqm_pauli_sum *h, char *buf, size_t cap,
                                        size_t *needed);
VQM_API vqm_status vqm_pauli_sum_num_qubits(const vqm_pauli_sum *h, int *out);
VQM_API vqm_status vqm_pauli_sum_num_terms(const vqm_pauli_sum *h, size_t *out);
VQM_API void vqm_pauli_sum_destroy(vqm_pauli_sum *h);

VQM_API vqm_status vqm_sho_create(double omega, int n_qubits, vqm_pauli_sum **out);
/* FCIDUMP file mapped with Jordan-Wigner. n_electrons may be NULL. */
VQM_API vqm_status vqm_fcidump_load(const char *path, int order, vqm_pauli_sum **out,
                                    int *n_electrons);

/* Exact reference values (dense, n <= 12). */
VQM_API vqm_status vqm_ground_energy(const vqm_pauli_sum *h, double *out);
VQM_API vqm_status vqm_eigenvalues(const vqm_pauli_sum *h, double *out, size_t cap,
                                   size_t *needed);

/* Ansatz programs. */
VQM_API vqm_status vqm_ansatz_hea(int n_qubits, int layers, vqm_ansatz **out);
VQM_API vqm_status vqm_ansatz_uccsd(int n_spin_orbitals, int n_electrons,
                                    vqm_ansatz **out);
VQM_API vqm_status vqm_ansatz_parse(const char *descriptor, vqm_ansatz **out);
VQM_API vqm_status vqm_ansatz_descriptor(const vqm_ansatz *a, char *buf, size_t cap,
                                         size_t *needed);
VQM_API vqm_status vqm_ansatz_num_qubits(const vqm_ansatz *a, int *out);
VQM_API vqm_status vqm_ansatz_num_params(const vqm_ansatz *a, int *out);
VQM_API void vqm_ansatz_destroy(vqm_ansatz *a);

/* States. */
VQM_API vqm_status vqm_state_prepare(const vqm_context *ctx, const vqm_ansatz *a,
                                     const double *theta, size_t n_theta, vqm_state **out);
VQM_API vqm_status vqm_state_overlap_sq(const vqm_context *ctx, const vqm_state *a,
                                        const vqm_state *b, double *out);
/* Interleaved (re, im) pairs; cap and *needed count doubles. */
VQM_API vqm_status vqm_state_amplitudes(const vqm_state *s, double *out, size_t cap,
                                        size_t *needed);
VQM_API void vqm_state_destroy(vqm_state *s);

VQM_API vqm_status vqm_energy(const vqm_context *ctx, const vqm_pauli_sum *h,
                              const vqm_ansatz *a, const double *theta, size_t n_theta,
                              double *out);
/* grad must hold n_theta values. */
VQM_API vqm_status vqm_gradient(const vqm_context *ctx, const vqm_pauli_sum *h,
                                const vqm_ansatz *a, const double *theta, size_t n_theta,
                                double *grad);

/* Optimization. */
VQM_API void vqm_optimizer_config_default(vqm_optimizer_config *cfg);
/* Zero or uniform on [-scale*pi, scale*pi]; out must hold n values. */
VQM_API vqm_status vqm_initial_parameters(int init_kind, size_t n, uint64_t seed,
                                          double scale, double *out);
/*
 * On VQM_ERR_NUMERICAL *out still receives the partial trace. Other
 * failures leave *out NULL.
 */
VQM_API vqm_status vqm_run_vqe(const vqm_context *ctx, const vqm_pauli_sum *h,
                               const vqm_ansatz *a, const double *theta0, size_t n_theta,
                               const vqm_optimizer_config *cfg, vqm_run **out);
VQM_API vqm_status vqm_run_vqd(const vqm_context *ctx, const vqm_pauli_sum *h,
                               const vqm_ansatz *a, const double *theta0, size_t n_theta,
                               const vqm_optimizer_config *cfg, double beta,
                               const vqm_state *const *references, size_t n_references,
                               vqm_run **out);
/* Records the initialization label and seed echoed by the JSON summary. */
VQM_API vqm_status vqm_run_set_origin(vqm_run *run, int init_kind, uint64_t seed);
VQM_API vqm_status vqm_run_iterations(const vqm_run *run, int *out);
VQM_API vqm_status vqm_run_converged(const vqm_run *run, int *out);
VQM_API vqm_status vqm_run_final_energy(const vqm_run *run, double *out);
VQM_API vqm_status vqm_run_final_overlap(const vqm_run *run, double *out);
VQM_API vqm_status vqm_run_wall_time(const vqm_run *run, double *seconds);
VQM_API vqm_status vqm_run_energies(const vqm_run *run, double *out, size_t cap,
                                    size_t *needed);
VQM_API vqm_status vqm_run_final_theta(const vqm_run *run, double *out, size_t cap,
                                       size_t *needed);
VQM_API vqm_status vqm_run_csv(const vqm_run *run, char *buf, size_t cap, size_t *needed);
VQM_API vqm_status vqm_run_summary_json(const vqm_run *run, char *buf, size_t cap,
                                        size_t *needed);
VQM_API void vqm_run_destroy(vqm_run *run);

/* Meta-learner. */
VQM_API vqm_status vqm_meta_create(int d_max, int hidden_dim, uint64_t seed, vqm_meta **out);
VQM_API vqm_status vqm_meta_load(const char *path, vqm_meta **out);
VQM_API vqm_status vqm_meta_save(const vqm_meta *m, const char *path);
VQM_API vqm_status vqm_meta_dims(const vqm_meta *m, int *d_max, int *hidden_dim);
VQM_API void vqm_meta_destroy(vqm_meta *m);
VQM_API void vqm_meta_train_config_default(vqm_meta_train_config *cfg);
/*
 * theta_out must hold the ansatz parameter count. energy_evaluations may be
 * NULL.
 */
VQM_API vqm_status vqm_meta_predict(const vqm_context *ctx, const vqm_meta *m,
                                    const vqm_pauli_sum *h, const vqm_ansatz *a,
                                    int unroll_steps, double *theta_out,
                                    int *energy_evaluations);
/*
 * Trains m in place on tasks (hamiltonians[i], ansatze[i]). loss_curve, if
 * non-NULL, must hold cfg->epochs values.
 */
VQM_API vqm_status vqm_meta_train(const vqm_context *ctx, vqm_meta *m,
                                  const vqm_pauli_sum *const *hamiltonians,
                                  const vqm_ansatz *const *ansatze, size_t n_tasks,
                                  const vqm_meta_train_config *cfg, double *loss_curve);

#ifdef __cplusplus
}
#endif

#endif /* VQM_VQM_H */
