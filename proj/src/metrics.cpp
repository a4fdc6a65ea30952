// SPDX-License-Identifier: Apache-2.0
#include "specden/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "specden/mel.hpp"

namespace specden {

double score_recording(const AutoencoderParams& params, const MatrixXd& slice,
                       int mel_width) {
  if (mel_width < 1 || slice.cols() < mel_width) {
    throw std::invalid_argument("score_recording: need 1 <= mel_width <= T");
  }
  const Index f = slice.rows();
  const Index n_windows = slice.cols() - mel_width + 1;
  MatrixXd windows(f * mel_width, n_windows);
  for (Index i = 0; i < n_windows; ++i) {
    windows.col(i) =
        Eigen::Map<const VectorXd>(slice.data() + i * f, f * mel_width);
  }
  const MatrixXd recon = forward_batch(params, windows);
  return (recon - windows).colwise().squaredNorm().sum() /
         static_cast<double>(n_windows);
}

Label classify(double score, double phi) {
  return score >= phi ? Label::abnormal : Label::normal;
}

double pick_threshold(std::vector<double> train_scores, double quantile) {
  if (train_scores.empty()) {
    throw std::invalid_argument("pick_threshold: empty scores");
  }
  if (!(quantile > 0.0) || quantile > 1.0) {
    throw std::invalid_argument("pick_threshold: quantile must be in (0, 1]");
  }
  std::sort(train_scores.begin(), train_scores.end());
  const double h = quantile * static_cast<double>(train_scores.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= train_scores.size()) {
    return train_scores.back();
  }
  const double frac = h - static_cast<double>(lo);
  return train_scores[lo] + frac * (train_scores[lo + 1] - train_scores[lo]);
}

RocResult roc_auc(const std::vector<ScoredRecording>& scored) {
  Index n_abnormal = 0, n_normal = 0;
  for (const auto& rec : scored) {
    (rec.label == Label::abnormal ? n_abnormal : n_normal) += 1;
  }
  if (n_abnormal == 0 || n_normal == 0) {
    throw std::invalid_argument("roc_auc: need both labels present");
  }

  std::vector<double> thresholds;
  thresholds.reserve(scored.size());
  for (const auto& rec : scored) {
    thresholds.push_back(rec.score);
  }
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  RocResult result;
  result.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  for (double th : thresholds) {
    Index tp = 0, fp = 0;
    for (const auto& rec : scored) {
      if (rec.score >= th) {
        (rec.label == Label::abnormal ? tp : fp) += 1;
      }
    }
    result.points.push_back({static_cast<double>(fp) / n_normal,
                             static_cast<double>(tp) / n_abnormal, th});
  }

  double auc = 0.0;
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    const auto& a = result.points[i - 1];
    const auto& b = result.points[i];
    auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  result.auc = auc;
  return result;
}

}  // namespace specden
