// SPDX-License-Identifier: Apache-2.0
#include "specden/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace specden {

static_assert(std::endian::native == std::endian::little,
              "WAV and tensor I/O assume a little-endian host");

namespace {

struct FmtChunk {
  std::uint16_t format_code = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

void read_exact(std::ifstream& in, void* dst, std::size_t n,
                const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (in.gcount() != static_cast<std::streamsize>(n)) {
    throw std::runtime_error(std::string("load_wav: truncated ") + what);
  }
}

}  // namespace

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_wav: cannot open " + path.string());
  }

  char riff[12];
  read_exact(in, riff, sizeof riff, "RIFF header");
  if (std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(riff + 8, "WAVE", 4) != 0) {
    throw std::runtime_error("load_wav: not a RIFF/WAVE file: " + path.string());
  }

  FmtChunk fmt;
  bool have_fmt = false;
  std::vector<char> data;

  char chunk_header[8];
  while (in.read(chunk_header, sizeof chunk_header)) {
    std::uint32_t chunk_len;
    std::memcpy(&chunk_len, chunk_header + 4, 4);
    if (std::memcmp(chunk_header, "fmt ", 4) == 0) {
      if (chunk_len < 16) {
        throw std::runtime_error("load_wav: fmt chunk too short");
      }
      std::vector<char> raw(chunk_len);
      read_exact(in, raw.data(), chunk_len, "fmt chunk");
      std::memcpy(&fmt.format_code, raw.data() + 0, 2);
      std::memcpy(&fmt.channels, raw.data() + 2, 2);
      std::memcpy(&fmt.sample_rate, raw.data() + 4, 4);
      std::memcpy(&fmt.block_align, raw.data() + 12, 2);
      std::memcpy(&fmt.bits_per_sample, raw.data() + 14, 2);
      have_fmt = true;
    } else if (std::memcmp(chunk_header, "data", 4) == 0) {
      data.resize(chunk_len);
      read_exact(in, data.data(), chunk_len, "data chunk");
    } else {
      in.seekg(chunk_len, std::ios::cur);
    }
    if (chunk_len % 2 == 1) {
      in.seekg(1, std::ios::cur);  // chunks are word-aligned
    }
  }

  if (!have_fmt || data.empty()) {
    throw std::runtime_error("load_wav: missing fmt or data chunk: " +
                             path.string());
  }
  if (fmt.channels == 0) {
    throw std::runtime_error("load_wav: zero channels");
  }
  if (fmt.sample_rate == 0) {
    throw std::runtime_error("load_wav: zero sample rate");
  }

  const bool pcm16 = fmt.format_code == 1 && fmt.bits_per_sample == 16;
  const bool float32 = fmt.format_code == 3 && fmt.bits_per_sample == 32;
  if (!pcm16 && !float32) {
    throw std::runtime_error("load_wav: unsupported codec (only PCM16 and "
                             "IEEE float32): " + path.string());
  }

  const std::size_t bytes_per_sample = fmt.bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t n_frames = data.size() / frame_bytes;
  if (n_frames == 0) {
    throw std::runtime_error("load_wav: no samples: " + path.string());
  }

  AudioClip clip;
  clip.sample_rate = static_cast<double>(fmt.sample_rate);
  clip.samples.resize(static_cast<Index>(n_frames));
  // Channel 0 only.
  for (std::size_t i = 0; i < n_frames; ++i) {
    const char* src = data.data() + i * frame_bytes;
    if (pcm16) {
      std::int16_t s;
      std::memcpy(&s, src, 2);
      clip.samples[static_cast<Index>(i)] = static_cast<double>(s) / 32768.0;
    } else {
      float s;
      std::memcpy(&s, src, 4);
      clip.samples[static_cast<Index>(i)] = static_cast<double>(s);
    }
  }
  return clip;
}

void write_wav_pcm16(const std::filesystem::path& path, const VectorXd& samples,
                     int sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_wav_pcm16: cannot open " + path.string());
  }

  const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
  const std::uint32_t riff_len = 36 + data_len;
  const std::uint16_t channels = 1, bits = 16, block_align = 2;
  const std::uint16_t format_code = 1;
  const std::uint32_t sr = static_cast<std::uint32_t>(sample_rate);
  const std::uint32_t byte_rate = sr * block_align;
  const std::uint32_t fmt_len = 16;

  out.write("RIFF", 4);
  out.write(reinterpret_cast<const char*>(&riff_len), 4);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  out.write(reinterpret_cast<const char*>(&fmt_len), 4);
  out.write(reinterpret_cast<const char*>(&format_code), 2);
  out.write(reinterpret_cast<const char*>(&channels), 2);
  out.write(reinterpret_cast<const char*>(&sr), 4);
  out.write(reinterpret_cast<const char*>(&byte_rate), 4);
  out.write(reinterpret_cast<const char*>(&block_align), 2);
  out.write(reinterpret_cast<const char*>(&bits), 2);
  out.write("data", 4);
  out.write(reinterpret_cast<const char*>(&data_len), 4);

  for (Index i = 0; i < samples.size(); ++i) {
    const double scaled = std::round(samples[i] * 32768.0);
    const auto s = static_cast<std::int16_t>(
        std::clamp(scaled, -32768.0, 32767.0));
    out.write(reinterpret_cast<const char*>(&s), 2);
  }
  if (!out) {
    throw std::runtime_error("write_wav_pcm16: write failed: " + path.string());
  }
}

}  // namespace specden
