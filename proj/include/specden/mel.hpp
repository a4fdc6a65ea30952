// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "specden/tensor.hpp"
#include "specden/types.hpp"

namespace specden {

/// Single-channel audio at a fixed sample rate.
struct AudioClip {
  VectorXd samples;
  double sample_rate = 0.0;
};

struct MelConfig {
  double sample_rate = 16000.0;
  int frame_len = 1024;
  int hop = 512;
  int n_mels = 64;
  double f_min = 0.0;
  double f_max = 0.0;  ///< 0 means sample_rate / 2
  double log_floor = 1e-10;
  bool center_pad = true;

  double resolved_f_max() const {
    return f_max > 0.0 ? f_max : sample_rate / 2.0;
  }
};

/// HTK mel scale: 2595 * log10(1 + hz/700).
double mel_scale(double hz);
double mel_to_hz(double mel);

/// Triangular unit-peak filterbank, n_mels x (frame_len/2 + 1). Filter j
/// rises from mel point j to j+1 and falls to j+2 on an equally spaced
/// mel grid over [f_min, f_max].
MatrixXd mel_filterbank(const MelConfig& cfg);

/// F x T log-mel spectrogram: Hann-windowed STFT power spectrum through the
/// mel filterbank, then 10*log10(. + log_floor). With center_pad the signal
/// is reflect-padded by frame_len/2 on each side, so
/// T = 1 + floor(len / hop) for a clip of `len` samples.
MatrixXd log_mel(const AudioClip& clip, const MelConfig& cfg);

/// Stacks per-clip log-mel matrices along the third mode, preserving input
/// order. All clips must share the sample rate and produce identical T.
Tensor3d build_tensor(const std::vector<AudioClip>& clips, const MelConfig& cfg);

/// Elementwise absolute value.
Tensor3d abs_transform(const Tensor3d& x);

/// Sliding windows of `width` consecutive frames from one recording:
/// T-width+1 vectors of length width*F, window i concatenating columns
/// i..i+width-1. Never crosses recording boundaries.
std::vector<FrameVector> stack_frames(const MatrixXd& slice, int width = 5);

/// All recordings' stacked frames as columns, recording-major.
MatrixXd stacked_frame_matrix(const Tensor3d& x, int width);

}  // namespace specden
