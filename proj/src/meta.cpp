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

#include "vqm/meta.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <exception>
#include <numeric>
#include <random>

#include "vqm/error.hpp"
#include "vqm/hamiltonians.hpp"
#include "vqm/optimize.hpp"

namespace vqm {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_shape(const MetaLearner &m) {
  require(m.d_max() >= 1 && m.hidden_dim() >= 1, ErrorKind::Shape,
          "meta-learner dimensions must be positive");
  require(m.weights().size() == MetaLearner::weight_count(m.d_max(), m.hidden_dim()),
          ErrorKind::Shape, "meta-learner weight buffer has the wrong size");
}

void check_task(const MetaLearner &m, const MetaTask &task) {
  require(task.hamiltonian.num_qubits() == task.ansatz.num_qubits(), ErrorKind::Shape,
          "task Hamiltonian and ansatz sizes differ");
  if (task.num_params() > m.d_max())
    fail(ErrorKind::Capacity, "task has " + std::to_string(task.num_params()) +
                                  " parameters, model capacity is " +
                                  std::to_string(m.d_max()));
}

double energy_scale(double e0) { return std::max(1.0, std::abs(e0)); }

} // namespace

// ---------------------------------------------------------------------------
// Model

std::size_t MetaLearner::weight_count(int d_max, int hidden_dim) {
  const std::size_t h = static_cast<std::size_t>(hidden_dim);
  const std::size_t d = static_cast<std::size_t>(d_max);
  const std::size_t in = d + 1;
  return 4 * h * in + 4 * h * h + 4 * h + d * h + d;
}

MetaLearner::MetaLearner(int d_max, int hidden_dim) : d_max_(d_max), hidden_(hidden_dim) {
  require(d_max >= 1 && hidden_dim >= 1, ErrorKind::Argument,
          "meta-learner dimensions must be positive");
  w_.assign(weight_count(d_max, hidden_dim), 0.0);
}

MetaLearner MetaLearner::initialized(int d_max, int hidden_dim, std::uint64_t seed,
                                     double range, double forget_bias) {
  MetaLearner m(d_max, hidden_dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-range, range);
  auto w = m.weights();
  for (std::size_t k = m.off_wx(); k < m.off_b(); ++k)
    w[k] = dist(rng);
  for (std::size_t k = m.off_wfc(); k < m.off_bfc(); ++k)
    w[k] = dist(rng);
  for (int j = 0; j < hidden_dim; ++j)
    w[m.off_b() + hidden_dim + j] = forget_bias;
  return m;
}

// ---------------------------------------------------------------------------
// Forward pieces

LstmState lstm_step(const MetaLearner &m, std::span<const double> x,
                    const LstmState &state, LstmTrace *trace) {
  check_shape(m);
  const int H = m.hidden_dim();
  const int I = m.input_dim();
  if (x.size() != static_cast<std::size_t>(I))
    fail(ErrorKind::Shape, "LSTM input has length " + std::to_string(x.size()) +
                               ", expected " + std::to_string(I));
  require(state.h.size() == static_cast<std::size_t>(H) &&
              state.c.size() == static_cast<std::size_t>(H),
          ErrorKind::Shape, "LSTM state does not match hidden_dim");
  const auto w = m.weights();
  const double *wx = w.data() + m.off_wx();
  const double *wh = w.data() + m.off_wh();
  const double *b = w.data() + m.off_b();

  std::vector<double> z(4 * static_cast<std::size_t>(H));
  for (int r = 0; r < 4 * H; ++r) {
    double acc = b[r];
    const double *row_x = wx + static_cast<std::size_t>(r) * I;
    for (int k = 0; k < I; ++k)
      acc += row_x[k] * x[k];
    const double *row_h = wh + static_cast<std::size_t>(r) * H;
    for (int k = 0; k < H; ++k)
      acc += row_h[k] * state.h[k];
    z[r] = acc;
  }
  LstmState out = LstmState::zero(H);
  LstmTrace local;
  LstmTrace &t = trace != nullptr ? *trace : local;
  t.i.resize(H);
  t.f.resize(H);
  t.g.resize(H);
  t.o.resize(H);
  t.tanh_c.resize(H);
  for (int j = 0; j < H; ++j) {
    t.i[j] = sigmoid(z[j]);
    t.f[j] = sigmoid(z[H + j]);
    t.g[j] = std::tanh(z[2 * H + j]);
    t.o[j] = sigmoid(z[3 * H + j]);
    out.c[j] = t.f[j] * state.c[j] + t.i[j] * t.g[j];
    t.tanh_c[j] = std::tanh(out.c[j]);
    out.h[j] = t.o[j] * t.tanh_c[j];
  }
  return out;
}

std::vector<double> project(const MetaLearner &m, std::span<const double> h) {
  check_shape(m);
  const int H = m.hidden_dim();
  require(h.size() == static_cast<std::size_t>(H), ErrorKind::Shape,
          "hidden vector does not match hidden_dim");
  const auto w = m.weights();
  const double *wfc = w.data() + m.off_wfc();
  const double *bfc = w.data() + m.off_bfc();
  std::vector<double> y(static_cast<std::size_t>(m.d_max()));
  for (int r = 0; r < m.d_max(); ++r) {
    double acc = bfc[r];
    for (int k = 0; k < H; ++k)
      acc += wfc[static_cast<std::size_t>(r) * H + k] * h[k];
    y[r] = acc;
  }
  return y;
}

std::vector<double> pad_features(std::span<const double> theta_delta, double energy,
                                 double energy_scale, const MetaLearner &m) {
  if (theta_delta.size() > static_cast<std::size_t>(m.d_max()))
    fail(ErrorKind::Capacity, "parameter delta of length " +
                                  std::to_string(theta_delta.size()) +
                                  " exceeds model capacity " + std::to_string(m.d_max()));
  require(energy_scale > 0.0, ErrorKind::Argument, "energy scale must be positive");
  std::vector<double> x(static_cast<std::size_t>(m.input_dim()), 0.0);
  x[0] = energy / energy_scale;
  std::copy(theta_delta.begin(), theta_delta.end(), x.begin() + 1);
  return x;
}

std::vector<std::vector<double>> unroll_outputs(const MetaLearner &m,
                                                std::span<const std::vector<double>> inputs) {
  std::vector<std::vector<double>> out;
  auto state = LstmState::zero(m.hidden_dim());
  for (const auto &x : inputs) {
    state = lstm_step(m, x, state);
    out.push_back(project(m, state.h));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inference

MetaPrediction predict_init(const MetaLearner &m, const MetaTask &task, int unroll_steps,
                            const Simulator &sim) {
  check_shape(m);
  check_task(m, task);
  require(unroll_steps >= 1, ErrorKind::Argument, "diffusion steps must be >= 1");
  const std::size_t n = static_cast<std::size_t>(task.num_params());

  MetaPrediction out;
  std::vector<double> prev(n, 0.0);  // theta_{k-2}
  std::vector<double> theta(n, 0.0); // theta_{k-1}
  double scale = 1.0;
  auto state = LstmState::zero(m.hidden_dim());
  std::vector<double> delta(n);
  for (int k = 1; k <= unroll_steps; ++k) {
    const double e = energy(task.ansatz, task.hamiltonian, theta, sim);
    ++out.energy_evaluations;
    out.energies.push_back(e);
    if (k == 1)
      scale = energy_scale(e);
    for (std::size_t i = 0; i < n; ++i)
      delta[i] = theta[i] - prev[i];
    state = lstm_step(m, pad_features(delta, e, scale, m), state);
    auto y = project(m, state.h);
    prev = theta;
    theta.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  }
  out.theta = std::move(theta);
  return out;
}

// ---------------------------------------------------------------------------
// Training

double meta_loss(const MetaLearner &m, const MetaTask &task, int unroll_steps,
                 MetaObjective objective, std::vector<double> *grad,
                 const Simulator &sim) {
  check_shape(m);
  check_task(m, task);
  require(unroll_steps >= 1, ErrorKind::Argument, "unroll steps must be >= 1");
  const bool supervised = objective == MetaObjective::Supervised;
  if (supervised)
    require(task.target.has_value() &&
                task.target->size() == static_cast<std::size_t>(task.num_params()),
            ErrorKind::Argument, "supervised objective needs a target of length n_params");

  const int K = unroll_steps;
  const int H = m.hidden_dim();
  const int I = m.input_dim();
  const std::size_t n = static_cast<std::size_t>(task.num_params());
  const auto &a = task.ansatz;
  const auto &h = task.hamiltonian;

  std::vector<std::vector<double>> theta(K + 1, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> x(K + 1);
  std::vector<LstmState> states(K + 1, LstmState::zero(H));
  std::vector<LstmTrace> traces(K + 1);
  std::vector<double> e(K + 1, 0.0);

  e[0] = energy(a, h, theta[0], sim);
  const double scale = energy_scale(e[0]);
  std::vector<double> delta(n);
  for (int k = 1; k <= K; ++k) {
    const auto &older = k >= 2 ? theta[k - 2] : theta[0];
    for (std::size_t i = 0; i < n; ++i)
      delta[i] = theta[k - 1][i] - older[i];
    x[k] = pad_features(delta, e[k - 1], scale, m);
    states[k] = lstm_step(m, x[k], states[k - 1], &traces[k]);
    const auto y = project(m, states[k].h);
    theta[k].assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    e[k] = energy(a, h, theta[k], sim);
  }

  double loss = 0.0;
  for (int k = 1; k <= K; ++k) {
    if (supervised) {
      double sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = theta[k][i] - (*task.target)[i];
        sq += d * d;
      }
      loss += n > 0 ? sq / static_cast<double>(n) : 0.0;
    } else {
      loss += e[k];
    }
  }
  if (grad == nullptr)
    return loss;

  // dE/dtheta_k: needed for the loss (energy objective) and for the energy
  // feature of step k + 1.
  std::vector<std::vector<double>> ge(K + 1);
  for (int k = 1; k <= K; ++k)
    if (!supervised || k < K)
      ge[k] = parameter_shift_gradient(a, h, theta[k], sim);

  grad->assign(m.weights().size(), 0.0);
  auto &g = *grad;
  const auto w = m.weights();
  const double *wx = w.data() + m.off_wx();
  const double *wh = w.data() + m.off_wh();
  const double *wfc = w.data() + m.off_wfc();
  double *gwx = g.data() + m.off_wx();
  double *gwh = g.data() + m.off_wh();
  double *gb = g.data() + m.off_b();
  double *gwfc = g.data() + m.off_wfc();
  double *gbfc = g.data() + m.off_bfc();

  std::vector<std::vector<double>> dx(K + 2);
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0);
  std::vector<double> dtheta(n), dh(H), dc(H), dz(4 * static_cast<std::size_t>(H));
  for (int k = K; k >= 1; --k) {
    // Loss and downstream-input contributions to theta_k.
    for (std::size_t i = 0; i < n; ++i) {
      dtheta[i] = supervised
                      ? 2.0 * (theta[k][i] - (*task.target)[i]) / static_cast<double>(n)
                      : ge[k][i];
      if (k + 1 <= K)
        dtheta[i] += dx[k + 1][0] / scale * ge[k][i] + dx[k + 1][1 + i];
      if (k + 2 <= K)
        dtheta[i] -= dx[k + 2][1 + i];
    }
    // Projection: theta_k = (W_fc h_k + b_fc)[:n]
    const auto &hk = states[k].h;
    for (int j = 0; j < H; ++j)
      dh[j] = dh_next[j];
    for (std::size_t r = 0; r < n; ++r) {
      gbfc[r] += dtheta[r];
      for (int j = 0; j < H; ++j) {
        gwfc[r * H + j] += dtheta[r] * hk[j];
        dh[j] += wfc[r * H + j] * dtheta[r];
      }
    }
    // Cell.
    const auto &t = traces[k];
    const auto &c_prev = states[k - 1].c;
    const auto &h_prev = states[k - 1].h;
    for (int j = 0; j < H; ++j) {
      const double tc = t.tanh_c[j];
      dc[j] = dc_next[j] + dh[j] * t.o[j] * (1.0 - tc * tc);
      const double d_o = dh[j] * tc;
      const double d_i = dc[j] * t.g[j];
      const double d_g = dc[j] * t.i[j];
      const double d_f = dc[j] * c_prev[j];
      dz[j] = d_i * t.i[j] * (1.0 - t.i[j]);
      dz[H + j] = d_f * t.f[j] * (1.0 - t.f[j]);
      dz[2 * H + j] = d_g * (1.0 - t.g[j] * t.g[j]);
      dz[3 * H + j] = d_o * t.o[j] * (1.0 - t.o[j]);
      dc_next[j] = dc[j] * t.f[j];
    }
    dx[k].assign(I, 0.0);
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (int r = 0; r < 4 * H; ++r) {
      const double d = dz[r];
      gb[r] += d;
      if (d == 0.0)
        continue;
      const std::size_t rx = static_cast<std::size_t>(r) * I;
      for (int col = 0; col < I; ++col) {
        gwx[rx + col] += d * x[k][col];
        dx[k][col] += wx[rx + col] * d;
      }
      const std::size_t rh = static_cast<std::size_t>(r) * H;
      for (int col = 0; col < H; ++col) {
        gwh[rh + col] += d * h_prev[col];
        dh_next[col] += wh[rh + col] * d;
      }
    }
  }
  return loss;
}

TrainResult train_meta(const MetaLearner &m, std::span<const MetaTask> tasks,
                       const TrainConfig &cfg, const Simulator &sim) {
  check_shape(m);
  require(!tasks.empty(), ErrorKind::Argument, "meta-training needs at least one task");
  require(cfg.unroll_steps >= 1, ErrorKind::Argument, "unroll steps must be >= 1");
  require(cfg.epochs >= 0, ErrorKind::Argument, "epochs must be >= 0");
  require(cfg.batch_size >= 1, ErrorKind::Argument, "batch size must be >= 1");
  require(cfg.meta_learning_rate >= 0.0, ErrorKind::Argument,
          "meta learning rate must be non-negative");
  for (const auto &t : tasks)
    check_task(m, t);

  TrainResult out{m, {}};
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), 0);

  OptimizerConfig adam_cfg;
  adam_cfg.learning_rate = cfg.meta_learning_rate;
  AdamState adam;
  const std::size_t n_weights = m.weights().size();
  const Simulator serial(1);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const std::size_t batch = end - start;
      std::vector<double> losses(batch, 0.0);
      std::vector<std::vector<double>> grads(batch);
      std::exception_ptr failure;
      const bool outer = sim.threads() > 1 && batch > 1;
      const Simulator &inner = outer ? serial : sim;
#pragma omp parallel for num_threads(sim.threads()) schedule(dynamic) if (outer)
      for (std::int64_t b = 0; b < static_cast<std::int64_t>(batch); ++b) {
        try {
          const auto &task = tasks[order[start + static_cast<std::size_t>(b)]];
          losses[b] = meta_loss(out.model, task, cfg.unroll_steps, cfg.objective,
                                &grads[b], inner);
        } catch (...) {
#pragma omp critical(vqm_meta_failure)
          if (!failure)
            failure = std::current_exception();
        }
      }
      if (failure) {
        try {
          std::rethrow_exception(failure);
        } catch (const Error &e) {
          if (e.kind() != ErrorKind::Numerical)
            throw;
          fail(ErrorKind::Training,
               "non-finite value in epoch " + std::to_string(epoch) + ": " + e.what());
        }
      }

      std::vector<double> mean_grad(n_weights, 0.0);
      for (std::size_t b = 0; b < batch; ++b) {
        if (!std::isfinite(losses[b]))
          fail(ErrorKind::Training,
               "non-finite meta-loss in epoch " + std::to_string(epoch));
        epoch_loss += losses[b];
        for (std::size_t k = 0; k < n_weights; ++k)
          mean_grad[k] += grads[b][k];
      }
      for (auto &v : mean_grad)
        v /= static_cast<double>(batch);
      std::vector<double> w(out.model.weights().begin(), out.model.weights().end());
      std::tie(adam, w) = adam_step(std::move(adam), std::move(w), mean_grad, adam_cfg);
      std::copy(w.begin(), w.end(), out.model.weights().begin());
    }
    epoch_loss /= static_cast<double>(tasks.size());
    if (!std::isfinite(epoch_loss))
      fail(ErrorKind::Training, "non-finite meta-loss in epoch " + std::to_string(epoch));
    out.loss_curve.push_back(epoch_loss);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kMagic[8] = {'V', 'Q', 'M', 'M', 'E', 'T', 'A', '\0'};

template <class T> void put_le(std::string &out, T value) {
  std::uint64_t bits = 0;
  if constexpr (std::is_same_v<T, double>)
    bits = std::bit_cast<std::uint64_t>(value);
  else
    bits = static_cast<std::uint64_t>(value);
  for (std::size_t b = 0; b < sizeof(T); ++b)
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

class Reader {
public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <class T> T get() {
    if (pos_ + sizeof(T) > bytes_.size())
      fail(ErrorKind::Parse, "model file truncated at byte " + std::to_string(pos_));
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b]))
              << (8 * b);
    pos_ += sizeof(T);
    if constexpr (std::is_same_v<T, double>)
      return std::bit_cast<double>(bits);
    else
      return static_cast<T>(bits);
  }

  std::string_view take(std::size_t n) {
    if (pos_ + n > bytes_.size())
      fail(ErrorKind::Parse, "model file truncated at byte " + std::to_string(pos_));
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

} // namespace

std::string serialize_meta(const MetaLearner &m) {
  check_shape(m);
  std::string out(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, kMetaFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.input_dim()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.hidden_dim()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.d_max()));
  put_le<std::uint32_t>(out, m.energy_scale_policy());
  put_le<std::uint64_t>(out, m.weights().size());
  for (double v : m.weights())
    put_le<double>(out, v);
  return out;
}

MetaLearner deserialize_meta(std::string_view bytes) {
  Reader r(bytes);
  if (r.take(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic))
    fail(ErrorKind::Parse, "not a meta-learner model file");
  const auto version = r.get<std::uint32_t>();
  if (version != kMetaFormatVersion)
    fail(ErrorKind::Version, "model format version " + std::to_string(version) +
                                 " is not supported (expected " +
                                 std::to_string(kMetaFormatVersion) + ")");
  const auto input_dim = r.get<std::uint32_t>();
  const auto hidden = r.get<std::uint32_t>();
  const auto d_max = r.get<std::uint32_t>();
  const auto policy = r.get<std::uint32_t>();
  const auto count = r.get<std::uint64_t>();
  if (d_max == 0 || hidden == 0 || input_dim != d_max + 1 || d_max > (1u << 20) ||
      hidden > (1u << 16))
    fail(ErrorKind::Shape, "inconsistent model dimensions");
  if (policy != MetaLearner::kScalePerTaskInitialEnergy)
    fail(ErrorKind::Parse, "unknown energy-scale policy " + std::to_string(policy));
  if (count != MetaLearner::weight_count(static_cast<int>(d_max), static_cast<int>(hidden)))
    fail(ErrorKind::Shape, "weight count does not match the model dimensions");
  MetaLearner m(static_cast<int>(d_max), static_cast<int>(hidden));
  for (auto &w : m.weights())
    w = r.get<double>();
  if (!r.done())
    fail(ErrorKind::Parse, "trailing bytes after model weights");
  return m;
}

void save_meta(const MetaLearner &m, const std::filesystem::path &path) {
  write_file_atomic(path, serialize_meta(m));
}

MetaLearner load_meta(const std::filesystem::path &path) {
  return deserialize_meta(read_file(path));
}

} // namespace vqm
