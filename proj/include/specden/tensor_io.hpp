// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "specden/autoencoder.hpp"
#include "specden/tensor.hpp"

namespace specden {

// Binary tensor file: magic "SDT3", u32 version = 1, u32 dtype = 1 (f64),
// u64 F, T, N, then F*T*N little-endian doubles with f fastest, then t,
// then n. Bit-exact interchange format across CLI subcommands.
void write_tensor(const std::filesystem::path& path, const Tensor3d& x);
Tensor3d read_tensor(const std::filesystem::path& path);

// Autoencoder blob: magic "SDAE", u32 version = 1, u32 layer count L,
// u64 dims[L+1], then per layer the weight matrix (column-major) and bias,
// little-endian doubles.
void write_autoencoder(const std::filesystem::path& path,
                       const AutoencoderParams& params);
AutoencoderParams read_autoencoder(const std::filesystem::path& path);

}  // namespace specden
