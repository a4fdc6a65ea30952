// SPDX-License-Identifier: Apache-2.0
#include "specden/nncp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
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

// Column-update passes repeated per mode: the MTTKRP `w` and the Hadamard
// Gram product `g` of the other two factors stay valid while only this mode
// changes, so the extra passes cost K^2-sized work against the KRP's
// FTN-sized work and pull the iterate through swamp phases much faster.
constexpr int kInnerPasses = 5;

// One mode's HALS update. In-place so later columns see earlier updates.
// A column whose Gram diagonal vanishes contributes nothing to the
// reconstruction; it is reseeded from uniform noise at the residual's
// magnitude instead of updated.
void hals_update_mode(MatrixXd& factor, const MatrixXd& w, const MatrixXd& g,
                      double eps, double reseed_scale, Rng& rng) {
  const Index k_rank = factor.cols();
  for (int pass = 0; pass < kInnerPasses; ++pass) {
    for (Index k = 0; k < k_rank; ++k) {
      const double gkk = g(k, k);
      if (!(gkk > 0.0)) {
        if (pass == 0) {
          for (Index i = 0; i < factor.rows(); ++i) {
            factor(i, k) = rng.uniform_pos() * reseed_scale;
          }
        }
        continue;
      }
      const VectorXd correction = w.col(k) - factor * g.col(k);
      factor.col(k) = (factor.col(k) + correction / gkk).cwiseMax(eps);
    }
  }
}

}  // namespace

CpModel nncp_fit(const Tensor3d& x, const SolverConfig& cfg) {
  if (x.size() == 0) {
    throw std::invalid_argument("nncp_fit: empty input");
  }
  if (x.values().minCoeff() < 0.0) {
    throw std::invalid_argument("nncp_fit: input must be non-negative");
  }
  const Index f = x.dim_f(), t = x.dim_t(), n = x.dim_n();
  const Index k = cfg.rank;
  const Index k_max = std::min({t * n, f * n, f * t});
  if (k < 1 || k > k_max) {
    throw std::invalid_argument("nncp_fit: rank out of range for these dims");
  }
  if (cfg.rel_tol <= 0.0 || cfg.epsilon_floor <= 0.0) {
    throw std::invalid_argument("nncp_fit: rel_tol and epsilon_floor must be > 0");
  }

  Rng rng(cfg.seed);
  const double scale = std::cbrt(x.values().mean() / static_cast<double>(k));
  MatrixXd a = uniform_matrix(f, k, scale, rng);
  MatrixXd b = uniform_matrix(t, k, scale, rng);
  MatrixXd c = uniform_matrix(n, k, scale, rng);

  const auto x1 = x.matricized();
  const MatrixXd x2 = unfold_mode2(x);
  const MatrixXd x3 = unfold_mode3(x);
  const double norm_x_sq = x.values().squaredNorm();
  const double eps = cfg.epsilon_floor;
  const double numel = static_cast<double>(x.size());

  // ||X - X^||^2 via the Gram identity; w3 = X(3) * (B o A) is the mode-3
  // MTTKRP and g3 the matching Gram product, both valid after c's update.
  auto objective = [&](const MatrixXd& w3, const MatrixXd& g3) {
    const double cross = (c.array() * w3.array()).sum();
    const double model_sq = ((c.transpose() * c).array() * g3.array()).sum();
    return std::max(0.0, norm_x_sq - 2.0 * cross + model_sq);
  };

  CpModel model;
  model.rank = k;
  model.fit_history.reserve(cfg.max_iters + 1);
  {
    const MatrixXd w3 = x3 * khatri_rao(b, a);
    const MatrixXd g3 =
        ((b.transpose() * b).array() * (a.transpose() * a).array()).matrix();
    model.fit_history.push_back(objective(w3, g3));
  }

  for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
    const double reseed_scale =
        std::cbrt(std::sqrt(model.fit_history.back() / numel));

    MatrixXd gram_b = b.transpose() * b;
    MatrixXd gram_c = c.transpose() * c;
    MatrixXd w1 = x1 * khatri_rao(c, b);
    hals_update_mode(a, w1, (gram_c.array() * gram_b.array()).matrix(), eps,
                     reseed_scale, rng);

    MatrixXd gram_a = a.transpose() * a;
    MatrixXd w2 = x2 * khatri_rao(c, a);
    hals_update_mode(b, w2, (gram_c.array() * gram_a.array()).matrix(), eps,
                     reseed_scale, rng);

    gram_b = b.transpose() * b;
    const MatrixXd g3 = (gram_b.array() * gram_a.array()).matrix();
    MatrixXd w3 = x3 * khatri_rao(b, a);
    hals_update_mode(c, w3, g3, eps, reseed_scale, rng);

    const double obj = objective(w3, g3);
    const double prev = model.fit_history.back();
    model.fit_history.push_back(obj);
    if (prev - obj < cfg.rel_tol * std::max(prev, 1e-300)) {
      break;
    }
  }

  model.a = std::move(a);
  model.b = std::move(b);
  model.c = std::move(c);
  return model;
}

Tensor3d cp_reconstruct(const CpModel& model) {
  return cp_reconstruct(model.a, model.b, model.c);
}

Tensor3d nncp_denoise(const CpModel& model) { return cp_reconstruct(model); }

Index select_rank(const std::vector<std::pair<Index, double>>& errors_by_k) {
  if (errors_by_k.size() < 3) {
    throw std::invalid_argument("select_rank: need at least 3 candidates");
  }
  std::vector<std::pair<Index, double>> pts = errors_by_k;
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].second > pts[i - 1].second) {
      std::cerr << "select_rank: warning: fit error increases at rank "
                << pts[i].first << "\n";
      break;
    }
  }

  // Perpendicular distance to the line through the first and last points;
  // endpoints are the anchors, so only interior candidates can be the elbow.
  const double x0 = static_cast<double>(pts.front().first);
  const double y0 = pts.front().second;
  const double dx = static_cast<double>(pts.back().first) - x0;
  const double dy = pts.back().second - y0;
  const double len = std::hypot(dx, dy);

  Index best_k = pts[1].first;
  double best_dist = -1.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double px = static_cast<double>(pts[i].first) - x0;
    const double py = pts[i].second - y0;
    const double dist = std::abs(dx * py - dy * px) / std::max(len, 1e-300);
    if (dist > best_dist) {
      best_dist = dist;
      best_k = pts[i].first;
    }
  }
  return best_k;
}

}  // namespace specden
