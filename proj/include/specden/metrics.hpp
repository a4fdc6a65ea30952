// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "specden/autoencoder.hpp"
#include "specden/types.hpp"

namespace specden {

enum class Label { normal, abnormal };

struct ScoredRecording {
  std::string recording_id;
  Label label = Label::normal;
  double score = 0.0;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocResult {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Mean reconstruction loss over all stacked frames of one recording's
/// F x T slice.
double score_recording(const AutoencoderParams& params, const MatrixXd& slice,
                       int mel_width);

/// Abnormal iff score >= phi.
Label classify(double score, double phi);

/// Empirical quantile of the training scores with linear interpolation
/// between order statistics; quantile in (0, 1].
double pick_threshold(std::vector<double> train_scores, double quantile = 0.99);

/// ROC curve by sweeping the unique scores as thresholds (descending), with
/// the AUC from trapezoidal integration. Tied scores contribute diagonal
/// segments, so the value matches the Mann-Whitney statistic with the
/// half-credit tie convention. Needs at least one recording of each label.
RocResult roc_auc(const std::vector<ScoredRecording>& scored);

}  // namespace specden
