// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "specden/mel.hpp"
#include "specden/types.hpp"

namespace specden {

/// Decodes a RIFF/WAVE file (PCM 16-bit or IEEE float32). Returns channel 0
/// only, as reals in [-1, 1] (16-bit samples scaled by 1/32768).
AudioClip load_wav(const std::filesystem::path& path);

/// Writes a mono PCM 16-bit WAV; samples are clamped to [-1, 1] and scaled
/// by 32768.
void write_wav_pcm16(const std::filesystem::path& path, const VectorXd& samples,
                     int sample_rate);

}  // namespace specden
