// SPDX-License-Identifier: Apache-2.0
#include "specden/mel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace specden {

double mel_scale(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MatrixXd mel_filterbank(const MelConfig& cfg) {
  if (cfg.n_mels < 1) {
    throw std::invalid_argument("mel_filterbank: n_mels must be >= 1");
  }
  const double f_max = cfg.resolved_f_max();
  if (!(cfg.f_min < f_max) || f_max > cfg.sample_rate / 2.0 + 1e-9) {
    throw std::invalid_argument("mel_filterbank: need f_min < f_max <= sr/2");
  }
  const Index n_bins = cfg.frame_len / 2 + 1;

  // n_mels + 2 equally spaced mel points; filter j peaks at point j+1.
  const double mel_lo = mel_scale(cfg.f_min);
  const double mel_hi = mel_scale(f_max);
  std::vector<double> f_pts(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i) {
    f_pts[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));
  }

  MatrixXd fb = MatrixXd::Zero(cfg.n_mels, n_bins);
  for (int j = 0; j < cfg.n_mels; ++j) {
    const double left = f_pts[j], center = f_pts[j + 1], right = f_pts[j + 2];
    for (Index bin = 0; bin < n_bins; ++bin) {
      const double f = static_cast<double>(bin) * cfg.sample_rate /
                       static_cast<double>(cfg.frame_len);
      const double rising = (f - left) / (center - left);
      const double falling = (right - f) / (right - center);
      fb(j, bin) = std::max(0.0, std::min(rising, falling));
    }
  }
  return fb;
}

namespace {

// Reflection without edge duplication, bouncing at both ends.
Index reflect_index(Index i, Index n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

}  // namespace

MatrixXd log_mel(const AudioClip& clip, const MelConfig& cfg) {
  const Index len = clip.samples.size();
  if (len < cfg.frame_len) {
    throw std::invalid_argument("log_mel: clip shorter than one frame");
  }
  if (cfg.hop < 1 || cfg.hop > cfg.frame_len) {
    throw std::invalid_argument("log_mel: need 1 <= hop <= frame_len");
  }
  if (cfg.log_floor <= 0.0) {
    throw std::invalid_argument("log_mel: log_floor must be > 0");
  }

  const Index pad = cfg.center_pad ? cfg.frame_len / 2 : 0;
  const Index padded_len = len + 2 * pad;
  const Index n_frames = 1 + (padded_len - cfg.frame_len) / cfg.hop;
  const Index n_bins = cfg.frame_len / 2 + 1;

  VectorXd window(cfg.frame_len);
  for (Index j = 0; j < cfg.frame_len; ++j) {
    window[j] = 0.5 - 0.5 * std::cos(2.0 * M_PI * j / cfg.frame_len);
  }

  const MatrixXd fb = mel_filterbank(cfg);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(cfg.frame_len);
  std::vector<std::complex<double>> spectrum;

  MatrixXd power(n_bins, n_frames);
  for (Index f = 0; f < n_frames; ++f) {
    const Index start = f * cfg.hop - pad;
    for (Index j = 0; j < cfg.frame_len; ++j) {
      frame[j] = clip.samples[reflect_index(start + j, len)] * window[j];
    }
    fft.fwd(spectrum, frame);
    for (Index bin = 0; bin < n_bins; ++bin) {
      power(bin, f) = std::norm(spectrum[bin]);
    }
  }

  MatrixXd mel = fb * power;
  return (10.0 * (mel.array() + cfg.log_floor).log10()).matrix();
}

Tensor3d build_tensor(const std::vector<AudioClip>& clips,
                      const MelConfig& cfg) {
  if (clips.empty()) {
    throw std::invalid_argument("build_tensor: no clips");
  }
  for (const auto& clip : clips) {
    if (clip.sample_rate != clips.front().sample_rate) {
      throw std::invalid_argument("build_tensor: heterogeneous sample rates");
    }
  }
  const MatrixXd first = log_mel(clips.front(), cfg);
  Tensor3d out(first.rows(), first.cols(),
               static_cast<Index>(clips.size()));
  out.slice(0) = first;
  for (std::size_t n = 1; n < clips.size(); ++n) {
    const MatrixXd m = log_mel(clips[n], cfg);
    if (m.cols() != first.cols()) {
      throw std::invalid_argument(
          "build_tensor: clip " + std::to_string(n) + " yields " +
          std::to_string(m.cols()) + " frames, expected " +
          std::to_string(first.cols()));
    }
    out.slice(static_cast<Index>(n)) = m;
  }
  return out;
}

Tensor3d abs_transform(const Tensor3d& x) {
  Tensor3d out = x;
  out.values() = out.values().cwiseAbs();
  return out;
}

std::vector<FrameVector> stack_frames(const MatrixXd& slice, int width) {
  if (width < 1 || slice.cols() < width) {
    throw std::invalid_argument("stack_frames: need 1 <= width <= T");
  }
  const Index f = slice.rows();
  std::vector<FrameVector> out;
  out.reserve(slice.cols() - width + 1);
  for (Index i = 0; i + width <= slice.cols(); ++i) {
    FrameVector v(f * width);
    for (Index w = 0; w < width; ++w) {
      v.segment(w * f, f) = slice.col(i + w);
    }
    out.push_back(std::move(v));
  }
  return out;
}

MatrixXd stacked_frame_matrix(const Tensor3d& x, int width) {
  if (width < 1 || x.dim_t() < width) {
    throw std::invalid_argument("stacked_frame_matrix: need 1 <= width <= T");
  }
  const Index f = x.dim_f();
  const Index per_slice = x.dim_t() - width + 1;
  MatrixXd out(f * width, per_slice * x.dim_n());
  for (Index n = 0; n < x.dim_n(); ++n) {
    const auto slice = x.slice(n);
    for (Index i = 0; i < per_slice; ++i) {
      // Windows are contiguous F*width blocks of the slice.
      out.col(n * per_slice + i) = Eigen::Map<const VectorXd>(
          slice.data() + i * f, f * static_cast<Index>(width));
    }
  }
  return out;
}

}  // namespace specden
