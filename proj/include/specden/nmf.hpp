// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "specden/tensor.hpp"
#include "specden/types.hpp"

namespace specden {

/// Shared settings for the NMF and CP solvers.
struct SolverConfig {
  Index rank = 10;
  int max_iters = 500;
  /// Stop once the relative per-iteration objective decrease falls below this.
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  /// Small positive floor added to denominators / used as the HALS projection.
  double epsilon_floor = 1e-12;
};

/// Non-negative factor pair approximating X ~ a * b^t.
struct NmfModel {
  MatrixXd a;  ///< F x K spectral components
  MatrixXd b;  ///< (T*N) x K temporal components
  Index rank = 0;
  /// Squared-error objective; entry 0 is the value at initialization,
  /// one entry per multiplicative-update iteration after that.
  std::vector<double> fit_history;
};

/// Multiplicative-update fit of ||X - a b^t||_F^2 with non-negative factors.
/// x_mat must be elementwise non-negative and rank <= min(rows, cols).
NmfModel nmf_fit(const MatrixXd& x_mat, const SolverConfig& cfg);

/// Reconstructs a * b^t and reshapes it into an F x dim_t x dim_n tensor.
Tensor3d nmf_denoise(const NmfModel& model, Index dim_t, Index dim_n);

}  // namespace specden
