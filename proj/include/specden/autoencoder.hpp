// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "specden/tensor.hpp"
#include "specden/types.hpp"

namespace specden {

/// Dense autoencoder: ReLU on every hidden layer, identity on the output
/// layer (the inputs may be negative, e.g. raw log-mel values).
struct AutoencoderParams {
  std::vector<Index> layer_dims;   ///< e.g. {320, 64, 64, 8, 64, 64, 320}
  std::vector<MatrixXd> weights;   ///< weights[l]: layer_dims[l+1] x layer_dims[l]
  std::vector<VectorXd> biases;

  Index input_dim() const { return layer_dims.front(); }
  Index n_layers() const { return static_cast<Index>(weights.size()); }
};

/// The canonical dimension chain {d_in, 64, 64, 8, 64, 64, d_in}.
std::vector<Index> default_layer_dims(Index d_in);

/// Glorot-uniform weights, zero biases; deterministic per seed.
AutoencoderParams init_autoencoder(const std::vector<Index>& layer_dims,
                                   std::uint64_t seed);

struct Gradients {
  std::vector<MatrixXd> d_weights;
  std::vector<VectorXd> d_biases;
};

struct AdamState {
  std::vector<MatrixXd> m_weights, v_weights;
  std::vector<VectorXd> m_biases, v_biases;
  long step = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(const AutoencoderParams& params);
void adam_step(AutoencoderParams& params, AdamState& state, const Gradients& g);

VectorXd forward(const AutoencoderParams& params, const VectorXd& x);
/// Column-wise batched forward pass.
MatrixXd forward_batch(const AutoencoderParams& params, const MatrixXd& xs);
/// Bottleneck activation (the first half of the layer chain).
VectorXd encode(const AutoencoderParams& params, const VectorXd& x);

/// Squared reconstruction error ||x - forward(x)||^2.
double loss(const AutoencoderParams& params, const VectorXd& x);

/// Exact gradient of the mean per-sample loss over the batch (columns).
/// The ReLU subgradient at 0 is taken as 0.
Gradients grad(const AutoencoderParams& params, const MatrixXd& batch);
Gradients grad(const AutoencoderParams& params,
               const std::vector<FrameVector>& batch);

struct TrainConfig {
  int epochs = 50;
  int batch_size = 512;
  std::uint64_t shuffle_seed = 0;
  std::uint64_t init_seed = 0;
};

struct TrainResult {
  AutoencoderParams params;
  std::vector<double> epoch_loss;  ///< mean per-sample loss per epoch
};

/// Builds the stacked-frame training set from all slices of x_train,
/// shuffles per epoch, and runs Adam for cfg.epochs. Deterministic given
/// both seeds. The last incomplete batch is kept.
TrainResult train(const Tensor3d& x_train, const TrainConfig& cfg,
                  int mel_width);

}  // namespace specden
