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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqm/ansatz.hpp"
#include "vqm/error.hpp"
#include "vqm/pauli.hpp"
#include "vqm/statevector.hpp"

namespace vqm {

enum class OptimizerKind { Adam, SGD };
enum class InitKind { Zero, Random, Meta };

const char *to_string(OptimizerKind kind);
const char *to_string(InitKind kind);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_iterations = 1000;
  /// Stop once |C_t - C_{t-1}| < tolerance (C = energy, or the deflated
  /// objective for VQD).
  double tolerance = 1e-7;
  /// Parameter vectors are traced every theta_stride iterations (0: never).
  int theta_stride = 1;

  void validate() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;
};

/// Bias-corrected Adam update.
std::pair<AdamState, std::vector<double>> adam_step(AdamState state,
                                                    std::vector<double> theta,
                                                    std::span<const double> grad,
                                                    const OptimizerConfig &cfg);
std::vector<double> sgd_step(std::vector<double> theta, std::span<const double> grad,
                             const OptimizerConfig &cfg);

/// Trace of one VQE or VQD run. Index t of every per-iteration vector is
/// iteration t, with t = 0 the initial parameters.
struct RunRecord {
  std::vector<double> energies;
  /// Deflated objective (equals energies for VQE).
  std::vector<double> objectives;
  /// Summed overlap with the VQD references (empty for VQE).
  std::vector<double> overlaps;
  /// Milliseconds since the start of the run.
  std::vector<double> wall_ms;
  std::vector<int> theta_iterations;
  std::vector<std::vector<double>> theta_trace;

  std::vector<double> final_theta;
  double final_energy = 0.0;
  double final_overlap = 0.0;
  int iterations = 0;
  double wall_time = 0.0; ///< seconds
  bool converged = false;
  InitKind init_kind = InitKind::Random;
  std::uint64_t seed = 0;
  std::optional<double> beta;
  OptimizerConfig config;

  /// CSV with header iter,energy,overlap_sq,wall_ms (overlap blank for VQE).
  std::string to_csv() const;
  /// JSON object: final energy, iterations, converged flag, seed, init,
  /// optimizer settings and, for VQD, beta.
  std::string summary_json() const;
};

/// Non-finite energy or gradient. Carries the trace up to the failure.
class NumericalFailure : public Error {
public:
  NumericalFailure(const std::string &message, RunRecord partial)
      : Error(ErrorKind::Numerical, message), partial_(std::move(partial)) {}
  const RunRecord &partial() const noexcept { return partial_; }

private:
  RunRecord partial_;
};

struct VqdConfig {
  double beta = 5.0;
  std::vector<StateVector> references;

  /// Default penalty weight 10 * omega for an oscillator of frequency omega.
  static double default_beta(double omega) { return 10.0 * omega; }
};

/// Zero or uniform on [-scale*pi, scale*pi] from a seeded generator.
std::vector<double> initial_parameters(InitKind kind, std::size_t n,
                                       std::uint64_t seed, double scale = 1.0);

/// Gradient descent on <H>(theta) with parameter-shift gradients.
RunRecord run_vqe(const PauliSum &h, const AnsatzProgram &a,
                  std::span<const double> theta0, const OptimizerConfig &cfg,
                  const Simulator &sim = Simulator{});

/// Minimizes <H> + beta * sum_r |<psi(theta)|psi_r>|^2. energies hold the
/// bare <H>; the penalty gradient uses the shift rule on the projectors.
RunRecord run_vqd(const PauliSum &h, const AnsatzProgram &a,
                  std::span<const double> theta0, const OptimizerConfig &cfg,
                  const VqdConfig &vqd, const Simulator &sim = Simulator{});

} // namespace vqm
