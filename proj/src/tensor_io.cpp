// SPDX-License-Identifier: Apache-2.0
#include "specden/tensor_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace specden {

namespace {

constexpr char kTensorMagic[4] = {'S', 'D', 'T', '3'};
constexpr char kModelMagic[4] = {'S', 'D', 'A', 'E'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeF64 = 1;

void read_exact(std::ifstream& in, void* dst, std::size_t n, const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (in.gcount() != static_cast<std::streamsize>(n)) {
    throw std::runtime_error(std::string("tensor_io: truncated ") + what);
  }
}

}  // namespace

void write_tensor(const std::filesystem::path& path, const Tensor3d& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_tensor: cannot open " + path.string());
  }
  out.write(kTensorMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), 4);
  out.write(reinterpret_cast<const char*>(&kDtypeF64), 4);
  const std::uint64_t dims[3] = {static_cast<std::uint64_t>(x.dim_f()),
                                 static_cast<std::uint64_t>(x.dim_t()),
                                 static_cast<std::uint64_t>(x.dim_n())};
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  out.write(reinterpret_cast<const char*>(x.values().data()),
            static_cast<std::streamsize>(x.size() * sizeof(double)));
  if (!out) {
    throw std::runtime_error("write_tensor: write failed: " + path.string());
  }
}

Tensor3d read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_tensor: cannot open " + path.string());
  }
  char magic[4];
  std::uint32_t version, dtype;
  read_exact(in, magic, 4, "magic");
  if (std::memcmp(magic, kTensorMagic, 4) != 0) {
    throw std::runtime_error("read_tensor: bad magic in " + path.string());
  }
  read_exact(in, &version, 4, "version");
  read_exact(in, &dtype, 4, "dtype");
  if (version != kVersion || dtype != kDtypeF64) {
    throw std::runtime_error("read_tensor: unsupported version/dtype in " +
                             path.string());
  }
  std::uint64_t dims[3];
  read_exact(in, dims, sizeof dims, "dims");
  if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1 ||
      dims[0] * dims[1] * dims[2] > (1ULL << 34)) {
    throw std::runtime_error("read_tensor: implausible dims in " + path.string());
  }
  Tensor3d x(static_cast<Index>(dims[0]), static_cast<Index>(dims[1]),
             static_cast<Index>(dims[2]));
  read_exact(in, x.values().data(), x.size() * sizeof(double), "payload");
  return x;
}

void write_autoencoder(const std::filesystem::path& path,
                       const AutoencoderParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_autoencoder: cannot open " + path.string());
  }
  out.write(kModelMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), 4);
  const auto n_layers = static_cast<std::uint32_t>(params.weights.size());
  out.write(reinterpret_cast<const char*>(&n_layers), 4);
  for (Index d : params.layer_dims) {
    const auto dim = static_cast<std::uint64_t>(d);
    out.write(reinterpret_cast<const char*>(&dim), 8);
  }
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    out.write(reinterpret_cast<const char*>(params.weights[l].data()),
              static_cast<std::streamsize>(params.weights[l].size() *
                                           sizeof(double)));
    out.write(reinterpret_cast<const char*>(params.biases[l].data()),
              static_cast<std::streamsize>(params.biases[l].size() *
                                           sizeof(double)));
  }
  if (!out) {
    throw std::runtime_error("write_autoencoder: write failed: " +
                             path.string());
  }
}

AutoencoderParams read_autoencoder(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_autoencoder: cannot open " + path.string());
  }
  char magic[4];
  std::uint32_t version, n_layers;
  read_exact(in, magic, 4, "magic");
  if (std::memcmp(magic, kModelMagic, 4) != 0) {
    throw std::runtime_error("read_autoencoder: bad magic in " + path.string());
  }
  read_exact(in, &version, 4, "version");
  if (version != kVersion) {
    throw std::runtime_error("read_autoencoder: unsupported version");
  }
  read_exact(in, &n_layers, 4, "layer count");
  if (n_layers < 1 || n_layers > 64) {
    throw std::runtime_error("read_autoencoder: implausible layer count");
  }
  AutoencoderParams params;
  params.layer_dims.resize(n_layers + 1);
  for (auto& d : params.layer_dims) {
    std::uint64_t dim;
    read_exact(in, &dim, 8, "dims");
    if (dim < 1 || dim > (1ULL << 24)) {
      throw std::runtime_error("read_autoencoder: implausible layer dim");
    }
    d = static_cast<Index>(dim);
  }
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    MatrixXd w(params.layer_dims[l + 1], params.layer_dims[l]);
    read_exact(in, w.data(), w.size() * sizeof(double), "weights");
    VectorXd b(params.layer_dims[l + 1]);
    read_exact(in, b.data(), b.size() * sizeof(double), "biases");
    params.weights.push_back(std::move(w));
    params.biases.push_back(std::move(b));
  }
  return params;
}

}  // namespace specden
