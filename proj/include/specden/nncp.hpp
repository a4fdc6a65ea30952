// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "specden/nmf.hpp"
#include "specden/tensor.hpp"
#include "specden/types.hpp"

namespace specden {

/// Non-negative CP factor triple approximating x ~ sum_k a_k x b_k x c_k.
struct CpModel {
  MatrixXd a;  ///< F x K spectral components
  MatrixXd b;  ///< T x K temporal components
  MatrixXd c;  ///< N x K recording components
  Index rank = 0;
  /// Objective per HALS sweep; entry 0 is the value at initialization.
  std::vector<double> fit_history;
};

/// HALS fit of the non-negative CP objective. x must be elementwise
/// non-negative; rank must not exceed the product of the two smaller
/// complementary dimensions of any mode.
CpModel nncp_fit(const Tensor3d& x, const SolverConfig& cfg);

Tensor3d cp_reconstruct(const CpModel& model);

/// Reconstructs the denoised tensor from the fitted factors.
Tensor3d nncp_denoise(const CpModel& model);

/// Elbow pick over (rank, fit_error) candidates: the interior candidate
/// furthest from the straight line through the first and last points,
/// ties broken toward the smaller rank. Needs at least 3 candidates;
/// warns on stderr if errors are not non-increasing in rank.
Index select_rank(const std::vector<std::pair<Index, double>>& errors_by_k);

}  // namespace specden
