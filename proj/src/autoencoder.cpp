// SPDX-License-Identifier: Apache-2.0
#include "specden/autoencoder.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "specden/mel.hpp"
#include "specden/rng.hpp"

namespace specden {

std::vector<Index> default_layer_dims(Index d_in) {
  return {d_in, 64, 64, 8, 64, 64, d_in};
}

AutoencoderParams init_autoencoder(const std::vector<Index>& layer_dims,
                                   std::uint64_t seed) {
  if (layer_dims.size() < 2) {
    throw std::invalid_argument("init_autoencoder: need at least two dims");
  }
  for (Index d : layer_dims) {
    if (d < 1) throw std::invalid_argument("init_autoencoder: dims must be >= 1");
  }
  Rng rng(seed);
  AutoencoderParams p;
  p.layer_dims = layer_dims;
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const Index fan_in = layer_dims[l];
    const Index fan_out = layer_dims[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    MatrixXd w(fan_out, fan_in);
    for (Index j = 0; j < fan_in; ++j) {
      for (Index i = 0; i < fan_out; ++i) {
        w(i, j) = rng.uniform(-bound, bound);
      }
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(VectorXd::Zero(fan_out));
  }
  return p;
}

AdamState make_adam_state(const AutoencoderParams& params) {
  AdamState s;
  for (Index l = 0; l < params.n_layers(); ++l) {
    s.m_weights.push_back(MatrixXd::Zero(params.weights[l].rows(),
                                         params.weights[l].cols()));
    s.v_weights.push_back(MatrixXd::Zero(params.weights[l].rows(),
                                         params.weights[l].cols()));
    s.m_biases.push_back(VectorXd::Zero(params.biases[l].size()));
    s.v_biases.push_back(VectorXd::Zero(params.biases[l].size()));
  }
  return s;
}

void adam_step(AutoencoderParams& params, AdamState& state,
               const Gradients& g) {
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, state.step);
  const double bc2 = 1.0 - std::pow(state.beta2, state.step);
  for (Index l = 0; l < params.n_layers(); ++l) {
    auto update = [&](auto& p, auto& m, auto& v, const auto& grad) {
      m = state.beta1 * m + (1.0 - state.beta1) * grad;
      v = (state.beta2 * v).array() + (1.0 - state.beta2) * grad.array().square();
      p.array() -= state.learning_rate * (m.array() / bc1) /
                   ((v.array() / bc2).sqrt() + state.epsilon);
    };
    update(params.weights[l], state.m_weights[l], state.v_weights[l],
           g.d_weights[l]);
    update(params.biases[l], state.m_biases[l], state.v_biases[l],
           g.d_biases[l]);
  }
}

MatrixXd forward_batch(const AutoencoderParams& params, const MatrixXd& xs) {
  if (xs.rows() != params.input_dim()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  MatrixXd h = xs;
  const Index layers = params.n_layers();
  for (Index l = 0; l < layers; ++l) {
    h = (params.weights[l] * h).colwise() + params.biases[l];
    if (l + 1 < layers) {
      h = h.cwiseMax(0.0);
    }
  }
  return h;
}

VectorXd forward(const AutoencoderParams& params, const VectorXd& x) {
  return forward_batch(params, x);
}

VectorXd encode(const AutoencoderParams& params, const VectorXd& x) {
  if (x.size() != params.input_dim()) {
    throw std::invalid_argument("encode: input dimension mismatch");
  }
  VectorXd h = x;
  for (Index l = 0; l < params.n_layers() / 2; ++l) {
    h = ((params.weights[l] * h) + params.biases[l]).cwiseMax(0.0);
  }
  return h;
}

double loss(const AutoencoderParams& params, const VectorXd& x) {
  return (x - forward(params, x)).squaredNorm();
}

namespace {

// Backprop for the mean batch loss; optionally reports the summed
// per-sample loss of the batch.
Gradients grad_impl(const AutoencoderParams& params, const MatrixXd& batch,
                    double* loss_sum) {
  if (batch.cols() == 0) {
    throw std::invalid_argument("grad: empty batch");
  }
  if (batch.rows() != params.input_dim()) {
    throw std::invalid_argument("grad: input dimension mismatch");
  }
  const Index layers = params.n_layers();
  const double inv_batch = 1.0 / static_cast<double>(batch.cols());

  // Forward pass keeping post-activations; activations[l] feeds layer l.
  std::vector<MatrixXd> activations(layers + 1);
  activations[0] = batch;
  for (Index l = 0; l < layers; ++l) {
    MatrixXd z = (params.weights[l] * activations[l]).colwise() + params.biases[l];
    activations[l + 1] = (l + 1 < layers) ? z.cwiseMax(0.0) : std::move(z);
  }

  if (loss_sum != nullptr) {
    *loss_sum = (activations[layers] - batch).squaredNorm();
  }

  Gradients g;
  g.d_weights.resize(layers);
  g.d_biases.resize(layers);
  // d/dx^ of ||x - x^||^2, averaged over the batch.
  MatrixXd delta = 2.0 * inv_batch * (activations[layers] - batch);
  for (Index l = layers - 1; l >= 0; --l) {
    g.d_weights[l].noalias() = delta * activations[l].transpose();
    g.d_biases[l] = delta.rowwise().sum();
    if (l > 0) {
      // ReLU subgradient at 0 is 0: pass only where the activation is > 0.
      delta = (params.weights[l].transpose() * delta).array() *
              (activations[l].array() > 0.0).cast<double>();
    }
  }
  return g;
}

}  // namespace

Gradients grad(const AutoencoderParams& params, const MatrixXd& batch) {
  return grad_impl(params, batch, nullptr);
}

Gradients grad(const AutoencoderParams& params,
               const std::vector<FrameVector>& batch) {
  if (batch.empty()) {
    throw std::invalid_argument("grad: empty batch");
  }
  MatrixXd m(batch.front().size(), static_cast<Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    m.col(static_cast<Index>(i)) = batch[i];
  }
  return grad(params, m);
}

TrainResult train(const Tensor3d& x_train, const TrainConfig& cfg,
                  int mel_width) {
  if (cfg.epochs < 1) {
    throw std::invalid_argument("train: epochs must be >= 1");
  }
  if (cfg.batch_size < 1) {
    throw std::invalid_argument("train: batch_size must be >= 1");
  }
  const MatrixXd data = stacked_frame_matrix(x_train, mel_width);
  const Index n_samples = data.cols();
  if (n_samples == 0) {
    throw std::invalid_argument("train: empty training set");
  }

  TrainResult result;
  result.params = init_autoencoder(default_layer_dims(data.rows()),
                                   cfg.init_seed);
  AdamState adam = make_adam_state(result.params);
  Rng shuffle_rng(cfg.shuffle_seed);

  std::vector<Index> order(n_samples);
  std::iota(order.begin(), order.end(), Index{0});
  MatrixXd batch;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates with the library RNG so the permutation stream is pinned
    // by the seed alone.
    for (Index i = n_samples - 1; i > 0; --i) {
      std::swap(order[i], order[shuffle_rng.index(i + 1)]);
    }
    double epoch_loss_sum = 0.0;
    for (Index start = 0; start < n_samples; start += cfg.batch_size) {
      const Index size = std::min<Index>(cfg.batch_size, n_samples - start);
      batch.resize(data.rows(), size);
      for (Index i = 0; i < size; ++i) {
        batch.col(i) = data.col(order[start + i]);
      }
      double batch_loss_sum = 0.0;
      const Gradients g = grad_impl(result.params, batch, &batch_loss_sum);
      adam_step(result.params, adam, g);
      epoch_loss_sum += batch_loss_sum;
    }
    result.epoch_loss.push_back(epoch_loss_sum / static_cast<double>(n_samples));
  }
  return result;
}

}  // namespace specden
