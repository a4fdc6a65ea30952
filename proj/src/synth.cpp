// SPDX-License-Identifier: Apache-2.0
#include "specden/synth.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "specden/rng.hpp"
#include "specden/wav.hpp"

namespace specden {

namespace {

constexpr double kTau = 2.0 * M_PI;

// Four fixed sinusoids; abnormal clips shift the third one's frequency.
constexpr double kToneFreqs[4] = {320.0, 950.0, 1900.0, 3600.0};
constexpr double kToneAmps[4] = {1.0, 0.85, 0.7, 0.55};
constexpr int kShiftedTone = 2;
constexpr double kFreqShift = 1.15;

// Candidate artefact bands, kept clear of the shifted tone at 2185 Hz so
// the class difference in that band stays attributable to the shift.
constexpr double kArtefactBands[3] = {600.0, 1300.0, 2600.0};

AudioClip stationary_clip(bool abnormal, std::uint64_t clip_seed,
                          double duration_s, double sample_rate) {
  Rng rng(clip_seed);
  const auto n = static_cast<Index>(duration_s * sample_rate);
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples = VectorXd::Zero(n);

  double freqs[4];
  for (int i = 0; i < 4; ++i) freqs[i] = kToneFreqs[i];
  if (abnormal) freqs[kShiftedTone] *= kFreqShift;

  double phases[4];
  for (double& p : phases) p = rng.uniform(0.0, kTau);

  double signal_power = 0.0;
  for (double a : kToneAmps) signal_power += a * a / 2.0;
  const double noise_std = std::sqrt(signal_power);  // 0 dB SNR

  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double v = 0.0;
    for (int k = 0; k < 4; ++k) {
      v += kToneAmps[k] * std::sin(kTau * freqs[k] * t + phases[k]);
    }
    v += noise_std * rng.normal();
    clip.samples[i] = v;
  }

  if (abnormal) {
    // Weak broadband component on top of the base noise.
    for (Index i = 0; i < n; ++i) {
      clip.samples[i] += 0.25 * noise_std * rng.normal();
    }
  }

  // Time-localized band artefact in ~30% of recordings of either class.
  if (rng.uniform() < 0.3) {
    const double band = kArtefactBands[rng.index(3)];
    const double t0 = rng.uniform(0.0, std::max(0.01, duration_s - 0.45));
    const auto i0 = static_cast<Index>(t0 * sample_rate);
    const auto i1 =
        std::min<Index>(n, i0 + static_cast<Index>(0.4 * sample_rate));
    double art_phase[3];
    for (double& p : art_phase) p = rng.uniform(0.0, kTau);
    for (Index i = i0; i < i1; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      for (int j = 0; j < 3; ++j) {
        clip.samples[i] +=
            1.2 * std::sin(kTau * (band + 40.0 * j) * t + art_phase[j]);
      }
    }
  }

  clip.samples *= 0.125;
  return clip;
}

AudioClip nonstationary_clip(bool abnormal, std::uint64_t clip_seed,
                             double duration_s, double sample_rate) {
  Rng rng(clip_seed);
  const auto n = static_cast<Index>(duration_s * sample_rate);
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples = VectorXd::Zero(n);

  // Mild stationary background: hum plus noise, kept well below the
  // impulse peaks.
  const double hum_phase = rng.uniform(0.0, kTau);
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    clip.samples[i] =
        0.15 * std::sin(kTau * 150.0 * t + hum_phase) + 0.06 * rng.normal();
  }

  const double period = 0.25;
  const int n_impulses = static_cast<int>(duration_s / period) - 1;
  std::vector<double> times;
  if (!abnormal) {
    // Periodic train, random onset inside one period.
    const double onset = rng.uniform(0.0, period);
    for (int k = 0; k < n_impulses; ++k) {
      times.push_back(onset + k * period);
    }
  } else {
    // Same impulse count, irregular spacing with clustered pairs.
    double t = rng.uniform(0.02, 0.12);
    for (int k = 0; k < n_impulses; ++k) {
      times.push_back(t);
      t += (k % 2 == 0) ? rng.uniform(0.045, 0.09) : rng.uniform(0.28, 0.42);
    }
  }

  const auto imp_len = static_cast<Index>(0.03 * sample_rate);
  for (double start : times) {
    const auto i0 = static_cast<Index>(start * sample_rate);
    for (Index j = 0; j < imp_len && i0 + j < n; ++j) {
      const double tau = static_cast<double>(j) / sample_rate;
      clip.samples[i0 + j] +=
          std::exp(-tau / 0.006) * std::sin(kTau * 2800.0 * tau);
    }
  }

  clip.samples *= 0.4;
  return clip;
}

SynthClips generate(bool stationary, int n_normal, int n_abnormal,
                    std::uint64_t seed, double duration_s,
                    double sample_rate) {
  if (n_normal < 1 || n_abnormal < 1) {
    throw std::invalid_argument("synth: counts must be >= 1");
  }
  SynthClips out;
  for (int i = 0; i < n_normal; ++i) {
    const std::uint64_t s = mix_seed(seed, 0, static_cast<std::uint64_t>(i));
    out.clips.push_back(stationary
                            ? stationary_clip(false, s, duration_s, sample_rate)
                            : nonstationary_clip(false, s, duration_s,
                                                 sample_rate));
    out.labels.push_back(Label::normal);
  }
  for (int i = 0; i < n_abnormal; ++i) {
    const std::uint64_t s = mix_seed(seed, 1, static_cast<std::uint64_t>(i));
    out.clips.push_back(stationary
                            ? stationary_clip(true, s, duration_s, sample_rate)
                            : nonstationary_clip(true, s, duration_s,
                                                 sample_rate));
    out.labels.push_back(Label::abnormal);
  }
  return out;
}

}  // namespace

SynthClips synth_stationary(int n_normal, int n_abnormal, std::uint64_t seed,
                            double duration_s, double sample_rate) {
  return generate(true, n_normal, n_abnormal, seed, duration_s, sample_rate);
}

SynthClips synth_nonstationary(int n_normal, int n_abnormal,
                               std::uint64_t seed, double duration_s,
                               double sample_rate) {
  return generate(false, n_normal, n_abnormal, seed, duration_s, sample_rate);
}

void write_synth_dataset(const std::filesystem::path& root,
                         const std::string& kind, int n_normal, int n_abnormal,
                         std::uint64_t seed, double duration_s) {
  SynthClips data;
  if (kind == "stationary") {
    data = synth_stationary(n_normal, n_abnormal, seed, duration_s);
  } else if (kind == "nonstationary") {
    data = synth_nonstationary(n_normal, n_abnormal, seed, duration_s);
  } else {
    throw std::invalid_argument("write_synth_dataset: unknown kind " + kind);
  }

  namespace fs = std::filesystem;
  const fs::path base = root / "0dB" / kind / "id_00";
  fs::create_directories(base / "normal");
  fs::create_directories(base / "abnormal");

  int idx_normal = 0, idx_abnormal = 0;
  char name[32];
  for (std::size_t i = 0; i < data.clips.size(); ++i) {
    const bool abnormal = data.labels[i] == Label::abnormal;
    const int idx = abnormal ? idx_abnormal++ : idx_normal++;
    std::snprintf(name, sizeof name, "%08d.wav", idx);
    const fs::path dir = base / (abnormal ? "abnormal" : "normal");
    write_wav_pcm16(dir / name, data.clips[i].samples,
                    static_cast<int>(data.clips[i].sample_rate));
  }
}

}  // namespace specden
