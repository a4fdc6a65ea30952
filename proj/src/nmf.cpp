// SPDX-License-Identifier: Apache-2.0
#include "specden/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specden/rng.hpp"

namespace specden {

namespace {

MatrixXd uniform_matrix(Index rows, Index cols, double scale, Rng& rng) {
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = rng.uniform_pos() * scale;
    }
  }
  return m;
}

}  // namespace

NmfModel nmf_fit(const MatrixXd& x_mat, const SolverConfig& cfg) {
  if (x_mat.size() == 0) {
    throw std::invalid_argument("nmf_fit: empty input");
  }
  if (x_mat.minCoeff() < 0.0) {
    throw std::invalid_argument("nmf_fit: input must be non-negative");
  }
  const Index k = cfg.rank;
  if (k < 1 || k > std::min(x_mat.rows(), x_mat.cols())) {
    throw std::invalid_argument("nmf_fit: rank must be in [1, min(rows, cols)]");
  }
  if (cfg.rel_tol <= 0.0 || cfg.epsilon_floor <= 0.0) {
    throw std::invalid_argument("nmf_fit: rel_tol and epsilon_floor must be > 0");
  }

  Rng rng(cfg.seed);
  // Uniform (0,1] scaled so the initial reconstruction sits at the data's
  // magnitude.
  const double scale = std::sqrt(x_mat.mean() / static_cast<double>(k));
  MatrixXd a = uniform_matrix(x_mat.rows(), k, scale, rng);
  MatrixXd b = uniform_matrix(x_mat.cols(), k, scale, rng);

  const double norm_x_sq = x_mat.squaredNorm();
  const double eps = cfg.epsilon_floor;

  // ||X - AB^t||^2 = ||X||^2 - 2<B, X^t A> + sum((A^t A) o (B^t B)).
  auto objective = [&](const MatrixXd& xt_a) {
    const double cross = (b.array() * xt_a.array()).sum();
    const double model_sq =
        ((a.transpose() * a).array() * (b.transpose() * b).array()).sum();
    return std::max(0.0, norm_x_sq - 2.0 * cross + model_sq);
  };

  NmfModel model;
  model.rank = k;
  model.fit_history.reserve(cfg.max_iters + 1);
  model.fit_history.push_back(objective(x_mat.transpose() * a));

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // A <- A o (X B) / (A B^t B + eps)
    const MatrixXd btb = b.transpose() * b;
    const MatrixXd numer_a = x_mat * b;
    a.array() *= numer_a.array() / ((a * btb).array() + eps);

    // B <- B o (X^t A) / (B A^t A + eps)
    const MatrixXd ata = a.transpose() * a;
    const MatrixXd numer_b = x_mat.transpose() * a;
    b.array() *= numer_b.array() / ((b * ata).array() + eps);

    const double obj = objective(numer_b);
    const double prev = model.fit_history.back();
    model.fit_history.push_back(obj);
    if (prev - obj < cfg.rel_tol * std::max(prev, 1e-300)) {
      break;
    }
  }

  model.a = std::move(a);
  model.b = std::move(b);
  return model;
}

Tensor3d nmf_denoise(const NmfModel& model, Index dim_t, Index dim_n) {
  if (model.b.rows() != dim_t * dim_n) {
    throw std::invalid_argument(
        "nmf_denoise: model.b has " + std::to_string(model.b.rows()) +
        " rows, expected dim_t*dim_n = " + std::to_string(dim_t * dim_n));
  }
  const MatrixXd recon = model.a * model.b.transpose();
  return tensorize(recon, dim_t, dim_n);
}

}  // namespace specden
