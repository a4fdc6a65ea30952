// SPDX-License-Identifier: Apache-2.0
//
// specden: log-mel feature extraction, NMF/nnCP spectral denoising, and
// autoencoder-based acoustic anomaly detection.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specden/dataset.hpp"
#include "specden/experiment.hpp"
#include "specden/metrics.hpp"
#include "specden/nncp.hpp"
#include "specden/synth.hpp"
#include "specden/tensor_io.hpp"
#include "specden/wav.hpp"

namespace fs = std::filesystem;
using namespace specden;

namespace {

void add_mel_options(CLI::App* app, MelConfig& mel) {
  app->add_option("--sample-rate", mel.sample_rate, "Expected sample rate");
  app->add_option("--frame-len", mel.frame_len, "STFT frame length");
  app->add_option("--hop", mel.hop, "STFT hop size");
  app->add_option("--n-mels", mel.n_mels, "Number of mel bands");
  app->add_option("--f-min", mel.f_min, "Lowest filter frequency");
  app->add_option("--f-max", mel.f_max, "Highest filter frequency (0 = sr/2)");
  app->add_option("--log-floor", mel.log_floor, "Additive floor before log10");
  app->add_flag("--no-center,!--center", mel.center_pad,
                "Disable reflect-pad centering")
      ->default_val(true);
}

void add_solver_options(CLI::App* app, SolverConfig& solver) {
  app->add_option("--max-iters", solver.max_iters,
                  "Iteration/sweep budget for the decomposition");
  app->add_option("--rel-tol", solver.rel_tol,
                  "Relative objective-decrease stopping tolerance");
  app->add_option("--solver-seed", solver.seed, "Decomposition RNG seed");
  app->add_option("--epsilon-floor", solver.epsilon_floor,
                  "Denominator/projection floor");
}

std::vector<fs::path> collect_wavs(const fs::path& input) {
  std::vector<fs::path> files;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                return a.filename().string() < b.filename().string();
              });
  } else {
    files.push_back(input);
  }
  if (files.empty()) {
    throw std::runtime_error("no .wav files under " + input.string());
  }
  return files;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral denoising and acoustic anomaly detection"};
  app.require_subcommand(1);

  // --- features -------------------------------------------------------
  auto* features = app.add_subcommand(
      "features", "Compute a log-mel tensor from a directory of WAV files");
  fs::path feat_input, feat_output = "features.tns", feat_manifest;
  MelConfig feat_mel;
  features->add_option("--input", feat_input, "WAV file or directory")
      ->required();
  features->add_option("--output", feat_output, "Output tensor file");
  features->add_option("--manifest", feat_manifest,
                       "Optional CSV listing index,filename");
  add_mel_options(features, feat_mel);
  features->callback([&] {
    const auto files = collect_wavs(feat_input);
    std::vector<AudioClip> clips;
    clips.reserve(files.size());
    for (const auto& f : files) {
      clips.push_back(load_wav(f));
    }
    const Tensor3d tensor = build_tensor(clips, feat_mel);
    write_tensor(feat_output, tensor);
    if (!feat_manifest.empty()) {
      std::ofstream out(feat_manifest);
      out << "index,filename\n";
      for (std::size_t i = 0; i < files.size(); ++i) {
        out << i << ',' << files[i].filename().string() << '\n';
      }
    }
    std::cout << "wrote " << tensor.dim_f() << "x" << tensor.dim_t() << "x"
              << tensor.dim_n() << " tensor to " << feat_output << "\n";
  });

  // --- denoise --------------------------------------------------------
  auto* denoise = app.add_subcommand(
      "denoise",
      "Denoise a tensor via NMF or nnCP (fits on the absolute values)");
  fs::path den_input, den_output = "denoised.tns", den_history;
  std::string den_method = "nncp";
  SolverConfig den_solver;
  denoise->add_option("--input", den_input, "Input tensor file")->required();
  denoise->add_option("--output", den_output, "Output tensor file");
  denoise->add_option("--method", den_method, "nmf or nncp")
      ->check(CLI::IsMember({"nmf", "nncp"}));
  denoise->add_option("--rank,-K", den_solver.rank, "Number of components")
      ->required();
  denoise->add_option("--history", den_history,
                      "Optional CSV of the objective per iteration");
  add_solver_options(denoise, den_solver);
  denoise->callback([&] {
    const Tensor3d x = abs_transform(read_tensor(den_input));
    Tensor3d denoised;
    std::vector<double> history;
    if (den_method == "nmf") {
      const NmfModel model = nmf_fit(x.matricized(), den_solver);
      denoised = nmf_denoise(model, x.dim_t(), x.dim_n());
      history = model.fit_history;
    } else {
      const CpModel model = nncp_fit(x, den_solver);
      denoised = nncp_denoise(model);
      history = model.fit_history;
    }
    write_tensor(den_output, denoised);
    if (!den_history.empty()) {
      std::ofstream out(den_history);
      out << "iteration,objective\n";
      for (std::size_t i = 0; i < history.size(); ++i) {
        out << i << ',' << format_double(history[i]) << '\n';
      }
    }
    std::cout << "wrote denoised tensor to " << den_output << " (final objective "
              << format_double(history.back()) << ")\n";
  });

  // --- train ----------------------------------------------------------
  auto* train_cmd = app.add_subcommand(
      "train", "Train the autoencoder on a (possibly denoised) tensor");
  fs::path train_input, train_output = "model.bin", train_loss_csv;
  TrainConfig train_cfg;
  int train_width = 5;
  train_cmd->add_option("--input", train_input, "Training tensor")->required();
  train_cmd->add_option("--output", train_output, "Output model blob");
  train_cmd->add_option("--epochs", train_cfg.epochs, "Training epochs");
  train_cmd->add_option("--batch-size", train_cfg.batch_size, "Batch size");
  train_cmd->add_option("--init-seed", train_cfg.init_seed,
                        "Weight initialization seed");
  train_cmd->add_option("--shuffle-seed", train_cfg.shuffle_seed,
                        "Epoch shuffle seed");
  train_cmd->add_option("--width", train_width, "Frames stacked per input");
  train_cmd->add_option("--loss-history", train_loss_csv,
                        "Optional CSV of mean loss per epoch");
  train_cmd->callback([&] {
    const Tensor3d x = read_tensor(train_input);
    const TrainResult result = train(x, train_cfg, train_width);
    write_autoencoder(train_output, result.params);
    if (!train_loss_csv.empty()) {
      std::ofstream out(train_loss_csv);
      out << "epoch,mean_loss\n";
      for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
        out << e + 1 << ',' << format_double(result.epoch_loss[e]) << '\n';
      }
    }
    std::cout << "trained " << result.epoch_loss.size() << " epochs, final mean loss "
              << format_double(result.epoch_loss.back()) << ", model in "
              << train_output << "\n";
  });

  // --- score ----------------------------------------------------------
  auto* score = app.add_subcommand(
      "score", "Score each recording of a tensor with a trained model");
  fs::path score_model, score_input, score_output = "scores.csv",
           score_manifest;
  int score_width = 5;
  double score_phi = 0.0;
  bool have_phi = false;
  score->add_option("--model", score_model, "Model blob")->required();
  score->add_option("--input", score_input, "Tensor to score")->required();
  score->add_option("--output", score_output, "Output CSV");
  score->add_option("--manifest", score_manifest,
                    "Manifest CSV from `features` for recording names");
  score->add_option("--width", score_width, "Frames stacked per input");
  score->add_option("--phi", score_phi,
                    "Decision threshold; adds a verdict column")
      ->trigger_on_parse()
      ->each([&](const std::string&) { have_phi = true; });
  score->callback([&] {
    const AutoencoderParams params = read_autoencoder(score_model);
    const Tensor3d x = read_tensor(score_input);
    std::vector<std::string> names(x.dim_n());
    for (Index n = 0; n < x.dim_n(); ++n) {
      names[n] = "recording_" + std::to_string(n);
    }
    if (!score_manifest.empty()) {
      std::ifstream in(score_manifest);
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        const auto idx = std::stoul(line.substr(0, comma));
        if (idx < names.size()) {
          names[idx] = line.substr(comma + 1);
        }
      }
    }
    std::ofstream out(score_output);
    out << "recording_id,score";
    if (have_phi) out << ",verdict";
    out << '\n';
    for (Index n = 0; n < x.dim_n(); ++n) {
      const double s = score_recording(params, x.slice(n), score_width);
      out << names[n] << ',' << format_double(s);
      if (have_phi) {
        out << ','
            << (classify(s, score_phi) == Label::abnormal ? "abnormal"
                                                          : "normal");
      }
      out << '\n';
    }
    std::cout << "wrote scores for " << x.dim_n() << " recordings to "
              << score_output << "\n";
  });

  // --- run ------------------------------------------------------------
  auto* run = app.add_subcommand(
      "run", "Full experiment: baseline/nmf/nncp AUC comparison");
  ExperimentConfig run_cfg;
  DatasetLayout layout;
  std::vector<std::string> run_setups = {"baseline", "nmf", "nncp"};
  std::vector<Index> run_ranks = {5, 10, 20};
  run->add_option("--root", layout.root, "Dataset root directory")->required();
  run->add_option("--machine", layout.machine, "Machine name")->required();
  run->add_option("--machine-id", layout.machine_id, "Machine id (e.g. id_00)")
      ->required();
  run->add_option("--snr", layout.snr_tag, "SNR tag (e.g. 0dB)")->required();
  run->add_option("--setups", run_setups, "Subset of baseline,nmf,nncp");
  run->add_option("--ranks", run_ranks, "Rank grid for nmf/nncp");
  run->add_option("--seeds", run_cfg.seeds, "Repetitions per cell");
  run->add_option("--epochs", run_cfg.train.epochs, "Training epochs");
  run->add_option("--batch-size", run_cfg.train.batch_size, "Batch size");
  run->add_option("--init-seed", run_cfg.train.init_seed, "Base weight seed");
  run->add_option("--shuffle-seed", run_cfg.train.shuffle_seed,
                  "Base shuffle seed");
  run->add_option("--width", run_cfg.mel_width, "Frames stacked per input");
  run->add_option("--out", run_cfg.output_dir, "Output directory")->required();
  add_mel_options(run, run_cfg.mel);
  add_solver_options(run, run_cfg.solver);
  run->callback([&] {
    run_cfg.setups.clear();
    for (const auto& name : run_setups) {
      run_cfg.setups.push_back(parse_setup(name));
    }
    run_cfg.rank_grid = run_ranks;
    const auto rows = run_experiment(run_cfg, layout);
    const auto summary = report(rows);
    std::cout << "machine,machine_id,snr,setup,best_K,mean_auc\n";
    for (const auto& s : summary) {
      std::cout << s.machine << ',' << s.machine_id << ',' << s.snr << ','
                << s.setup << ',';
      if (s.best_rank > 0) std::cout << s.best_rank;
      std::cout << ',' << format_double(s.mean_auc) << '\n';
    }
    std::cout << "results written to " << run_cfg.output_dir << "\n";
  });

  // --- synth ----------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic benchmark dataset as WAV files");
  std::string synth_kind = "stationary";
  fs::path synth_out;
  int synth_normal = 60, synth_abnormal = 20;
  std::uint64_t synth_seed = 1;
  double synth_duration = 2.0;
  synth->add_option("--kind", synth_kind, "stationary or nonstationary")
      ->check(CLI::IsMember({"stationary", "nonstationary"}));
  synth->add_option("--out", synth_out, "Dataset root to create")->required();
  synth->add_option("--n-normal", synth_normal, "Normal clips (train+valid)");
  synth->add_option("--n-abnormal", synth_abnormal, "Abnormal clips");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--duration", synth_duration, "Clip length in seconds");
  synth->callback([&] {
    write_synth_dataset(synth_out, synth_kind, synth_normal, synth_abnormal,
                        synth_seed, synth_duration);
    std::cout << "wrote " << synth_normal << "+" << synth_abnormal << " "
              << synth_kind << " clips under " << synth_out << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
