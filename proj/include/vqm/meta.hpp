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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqm/ansatz.hpp"
#include "vqm/pauli.hpp"
#include "vqm/statevector.hpp"

namespace vqm {

/// LSTM cell followed by a fully connected projection to d_max outputs.
///
/// Input vector: [energy / energy_scale, parameter delta zero-padded to
/// d_max]. All weights live in one flat buffer laid out as
///   W_x (4H x I) | W_h (4H x H) | b (4H) | W_fc (D x H) | b_fc (D)
/// row-major, gate blocks ordered input, forget, candidate, output.
class MetaLearner {
public:
  /// Energy normalization: divide by max(1, |E(0)|) of the task.
  static constexpr std::uint32_t kScalePerTaskInitialEnergy = 1;

  MetaLearner() = default;
  /// All-zero weights.
  MetaLearner(int d_max, int hidden_dim);

  /// Uniform [-range, range] weights, zero biases except forget gate = 1.
  static MetaLearner initialized(int d_max, int hidden_dim, std::uint64_t seed,
                                 double range = 0.08, double forget_bias = 1.0);

  int d_max() const noexcept { return d_max_; }
  int hidden_dim() const noexcept { return hidden_; }
  int input_dim() const noexcept { return d_max_ + 1; }
  std::uint32_t energy_scale_policy() const noexcept { return kScalePerTaskInitialEnergy; }

  std::span<const double> weights() const noexcept { return w_; }
  std::span<double> weights() noexcept { return w_; }
  static std::size_t weight_count(int d_max, int hidden_dim);

  // Block offsets into weights().
  std::size_t off_wx() const noexcept { return 0; }
  std::size_t off_wh() const noexcept { return off_wx() + 4 * hidden_ * input_dim(); }
  std::size_t off_b() const noexcept { return off_wh() + 4 * hidden_ * hidden_; }
  std::size_t off_wfc() const noexcept { return off_b() + 4 * hidden_; }
  std::size_t off_bfc() const noexcept { return off_wfc() + d_max_ * hidden_; }

  friend bool operator==(const MetaLearner &, const MetaLearner &) = default;

private:
  int d_max_ = 0;
  int hidden_ = 0;
  std::vector<double> w_;
};

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;

  static LstmState zero(int hidden_dim) {
    return {std::vector<double>(hidden_dim, 0.0), std::vector<double>(hidden_dim, 0.0)};
  }
};

/// Gate activations of one step, kept for backpropagation.
struct LstmTrace {
  std::vector<double> i, f, g, o;
  std::vector<double> tanh_c;
};

/// Standard LSTM cell: sigmoid input/forget/output gates, tanh candidate and
/// output nonlinearity. Returns the new (h, c); h is also the cell output.
LstmState lstm_step(const MetaLearner &m, std::span<const double> x,
                    const LstmState &state, LstmTrace *trace = nullptr);

/// W_fc h + b_fc, length d_max.
std::vector<double> project(const MetaLearner &m, std::span<const double> h);

/// [energy / energy_scale, theta_delta, 0 ... 0] of length 1 + d_max.
std::vector<double> pad_features(std::span<const double> theta_delta, double energy,
                                 double energy_scale, const MetaLearner &m);

/// Full d_max projections for an explicit input sequence (from zero state).
std::vector<std::vector<double>> unroll_outputs(const MetaLearner &m,
                                                std::span<const std::vector<double>> inputs);

struct MetaTask {
  PauliSum hamiltonian;
  AnsatzProgram ansatz;
  std::string descriptor;
  /// Regression target for the supervised objective.
  std::optional<std::vector<double>> target;

  int num_params() const noexcept { return ansatz.num_params(); }
};

struct MetaPrediction {
  std::vector<double> theta;
  /// E(theta_0) ... E(theta_{K-1}): the energies fed to the LSTM.
  std::vector<double> energies;
  int energy_evaluations = 0;
};

/// Unrolls K steps from theta_0 = 0: step k feeds
/// [E(theta_{k-1}), theta_{k-1} - theta_{k-2}] and sets theta_k to the first
/// n_params projections. One energy evaluation per step.
MetaPrediction predict_init(const MetaLearner &m, const MetaTask &task, int unroll_steps,
                            const Simulator &sim = Simulator{});

enum class MetaObjective {
  /// sum_k E(theta_k) over the unroll.
  Energy,
  /// sum_k mean_i (theta_k,i - target_i)^2 against task.target.
  Supervised,
};

struct TrainConfig {
  int unroll_steps = 3;
  int epochs = 100;
  double meta_learning_rate = 1e-2;
  int batch_size = 4;
  std::uint64_t seed = 0;
  MetaObjective objective = MetaObjective::Energy;
};

/// Meta-loss of one task and, when grad is non-null, its exact gradient with
/// respect to every weight (reverse accumulation through the unroll, energy
/// gradients from the parameter-shift rule).
double meta_loss(const MetaLearner &m, const MetaTask &task, int unroll_steps,
                 MetaObjective objective, std::vector<double> *grad,
                 const Simulator &sim = Simulator{});

struct TrainResult {
  MetaLearner model;
  /// Mean per-task loss of each epoch.
  std::vector<double> loss_curve;
};

/// Adam on the mean meta-loss of shuffled task batches.
TrainResult train_meta(const MetaLearner &m, std::span<const MetaTask> tasks,
                       const TrainConfig &cfg, const Simulator &sim = Simulator{});

/// Binary model file, little-endian:
///   "VQMMETA\0" | u32 version | u32 input_dim | u32 hidden_dim | u32 d_max
///   | u32 energy_scale_policy | u64 weight_count | f64 weights[weight_count]
inline constexpr std::uint32_t kMetaFormatVersion = 1;
std::string serialize_meta(const MetaLearner &m);
MetaLearner deserialize_meta(std::string_view bytes);
void save_meta(const MetaLearner &m, const std::filesystem::path &path);
MetaLearner load_meta(const std::filesystem::path &path);

} // namespace vqm
