// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "specden/autoencoder.hpp"
#include "specden/dataset.hpp"
#include "specden/mel.hpp"
#include "specden/nmf.hpp"
#include "specden/types.hpp"

namespace specden {

enum class Setup { baseline, nmf, nncp };

std::string setup_name(Setup s);
Setup parse_setup(const std::string& name);

struct ExperimentConfig {
  std::vector<Setup> setups = {Setup::baseline, Setup::nmf, Setup::nncp};
  std::vector<Index> rank_grid = {5, 10, 20};
  int seeds = 5;  ///< number of repetitions with different weight inits
  MelConfig mel;
  SolverConfig solver;
  TrainConfig train;
  int mel_width = 5;
  /// When set, results/summary/ROC files are written here.
  std::filesystem::path output_dir;
};

struct ResultRow {
  std::string machine;
  std::string machine_id;
  std::string snr;
  std::string setup;
  Index rank = 0;  ///< 0 for the baseline (no decomposition)
  int seed = 0;
  double auc = 0.0;
};

struct SummaryRow {
  std::string machine;
  std::string machine_id;
  std::string snr;
  std::string setup;
  Index best_rank = 0;
  double mean_auc = 0.0;
};

/// Runs the three-setup comparison on one machine dataset. For each
/// setup x rank x seed: the train tensor (denoised for nmf/nncp, after the
/// absolute-value transform) trains the autoencoder; the validation tensor
/// is denoised by a fresh decomposition fit on it independently with the
/// same rank; every validation recording is scored and the AUC recorded.
/// The repetition seed varies only the network initialization and shuffle,
/// so decompositions are shared across repetitions. Fully deterministic.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg,
                                      const DatasetLayout& layout);

/// Per (machine, machine_id, snr, setup): mean AUC over seeds for each
/// rank, keeping the best rank a posteriori.
std::vector<SummaryRow> report(const std::vector<ResultRow>& rows);

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<ResultRow>& rows);
void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SummaryRow>& rows);
void write_summary_json(const std::filesystem::path& path,
                        const std::vector<SummaryRow>& rows);

}  // namespace specden
