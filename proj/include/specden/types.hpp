// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace specden {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Double precision project-wide; the solvers need headroom below 1e-6.
using MatrixXd = MatrixX<double>;
using VectorXd = VectorX<double>;

/// One stacked (or single) spectrogram frame.
using FrameVector = VectorXd;

}  // namespace specden
