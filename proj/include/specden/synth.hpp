// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "specden/mel.hpp"
#include "specden/metrics.hpp"

namespace specden {

struct SynthClips {
  std::vector<AudioClip> clips;
  std::vector<Label> labels;
};

/// Desk-scale stand-in for a stationary machine. Normal clips are a fixed
/// sum of four sinusoids with per-recording random phase plus white noise at
/// 0 dB SNR; 30% of recordings carry a time-localized band artefact.
/// Abnormal clips additionally shift the third sinusoid's frequency by 15%
/// and add a weak broadband component. Deterministic per seed.
SynthClips synth_stationary(int n_normal, int n_abnormal, std::uint64_t seed,
                            double duration_s = 2.0,
                            double sample_rate = 16000.0);

/// Desk-scale stand-in for an impulsive machine. Normal clips are a periodic
/// impulse train with a per-recording random onset (constant impulse count);
/// abnormal clips fire the same number of impulses aperiodically, with some
/// pairs clustered close together. Deterministic per seed.
SynthClips synth_nonstationary(int n_normal, int n_abnormal, std::uint64_t seed,
                               double duration_s = 2.0,
                               double sample_rate = 16000.0);

/// Writes a generated benchmark in the MIMII-style directory layout:
/// <root>/0dB/<kind>/id_00/{normal,abnormal}/########.wav.
void write_synth_dataset(const std::filesystem::path& root,
                         const std::string& kind, int n_normal, int n_abnormal,
                         std::uint64_t seed, double duration_s = 2.0);

}  // namespace specden
