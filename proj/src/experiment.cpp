// SPDX-License-Identifier: Apache-2.0
#include "specden/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "specden/metrics.hpp"
#include "specden/nncp.hpp"
#include "specden/rng.hpp"
#include "specden/wav.hpp"

namespace specden {

namespace fs = std::filesystem;

std::string setup_name(Setup s) {
  switch (s) {
    case Setup::baseline: return "baseline";
    case Setup::nmf: return "nmf";
    case Setup::nncp: return "nncp";
  }
  throw std::logic_error("setup_name: bad setup");
}

Setup parse_setup(const std::string& name) {
  if (name == "baseline") return Setup::baseline;
  if (name == "nmf") return Setup::nmf;
  if (name == "nncp") return Setup::nncp;
  throw std::invalid_argument("unknown setup: " + name);
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Denoised input for one (setup, rank, phase) cell. The decomposition seed
// is derived from setup/rank/phase only, so the fit is shared across the
// autoencoder repetitions, which differ in weight initialization alone.
Tensor3d prepare_input(const ExperimentConfig& cfg, Setup setup, Index rank,
                       const Tensor3d& tensor, std::uint64_t phase_tag) {
  if (setup == Setup::baseline) {
    return tensor;
  }
  const Tensor3d absed = abs_transform(tensor);
  SolverConfig sc = cfg.solver;
  sc.rank = rank;
  sc.seed = mix_seed(cfg.solver.seed,
                     static_cast<std::uint64_t>(setup) * 2 + phase_tag,
                     static_cast<std::uint64_t>(rank));
  Tensor3d denoised;
  if (setup == Setup::nmf) {
    const NmfModel model = nmf_fit(absed.matricized(), sc);
    denoised = nmf_denoise(model, absed.dim_t(), absed.dim_n());
  } else {
    denoised = nncp_denoise(nncp_fit(absed, sc));
  }
  if (denoised.values().minCoeff() < 0.0) {
    throw std::logic_error("run_experiment: denoised tensor has negative entries");
  }
  return denoised;
}

void write_roc_csv(const fs::path& path, const RocResult& roc) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << "fpr,tpr,threshold\n";
  for (const auto& p : roc.points) {
    out << format_double(p.fpr) << ',' << format_double(p.tpr) << ','
        << format_double(p.threshold) << '\n';
  }
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg,
                                      const DatasetLayout& layout) {
  if (cfg.setups.empty()) {
    throw std::invalid_argument("run_experiment: no setups selected");
  }
  if (cfg.seeds < 1) {
    throw std::invalid_argument("run_experiment: seeds must be >= 1");
  }

  const DatasetSplit split = split_dataset(layout);
  {
    std::set<fs::path> train_set(split.train_normal.begin(),
                                 split.train_normal.end());
    for (const auto& p : split.valid_normal) {
      if (train_set.count(p)) {
        throw std::logic_error("run_experiment: train/validation overlap");
      }
    }
  }

  std::vector<AudioClip> train_clips;
  for (const auto& p : split.train_normal) {
    train_clips.push_back(load_wav(p));
  }
  std::vector<AudioClip> valid_clips;
  std::vector<ScoredRecording> valid_template;
  for (const auto& p : split.valid_normal) {
    valid_clips.push_back(load_wav(p));
    valid_template.push_back({"normal/" + p.filename().string(),
                              Label::normal, 0.0});
  }
  for (const auto& p : split.valid_abnormal) {
    valid_clips.push_back(load_wav(p));
    valid_template.push_back({"abnormal/" + p.filename().string(),
                              Label::abnormal, 0.0});
  }

  const Tensor3d train_tensor = build_tensor(train_clips, cfg.mel);
  const Tensor3d valid_tensor = build_tensor(valid_clips, cfg.mel);

  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
  }

  std::vector<ResultRow> rows;
  for (Setup setup : cfg.setups) {
    const std::vector<Index> ranks =
        setup == Setup::baseline ? std::vector<Index>{0} : cfg.rank_grid;
    for (Index rank : ranks) {
      const Tensor3d train_input =
          prepare_input(cfg, setup, rank, train_tensor, 0);
      const Tensor3d valid_input =
          prepare_input(cfg, setup, rank, valid_tensor, 1);

      for (int rep = 0; rep < cfg.seeds; ++rep) {
        TrainConfig tc = cfg.train;
        tc.init_seed = mix_seed(cfg.train.init_seed, 1,
                                static_cast<std::uint64_t>(rep));
        tc.shuffle_seed = mix_seed(cfg.train.shuffle_seed, 2,
                                   static_cast<std::uint64_t>(rep));
        const TrainResult tr = train(train_input, tc, cfg.mel_width);

        std::vector<ScoredRecording> scored = valid_template;
        for (Index n = 0; n < valid_input.dim_n(); ++n) {
          scored[n].score =
              score_recording(tr.params, valid_input.slice(n), cfg.mel_width);
        }
        const RocResult roc = roc_auc(scored);

        ResultRow row;
        row.machine = layout.machine;
        row.machine_id = layout.machine_id;
        row.snr = layout.snr_tag;
        row.setup = setup_name(setup);
        row.rank = rank;
        row.seed = rep;
        row.auc = roc.auc;
        rows.push_back(row);

        if (!cfg.output_dir.empty()) {
          std::string name = "roc_" + layout.machine + "_" + layout.machine_id +
                             "_" + layout.snr_tag + "_" + row.setup;
          if (rank > 0) {
            name += "_K" + std::to_string(rank);
          }
          name += "_s" + std::to_string(rep) + ".csv";
          write_roc_csv(cfg.output_dir / name, roc);
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.machine, a.machine_id, a.snr, a.setup, a.rank, a.seed) <
           std::tie(b.machine, b.machine_id, b.snr, b.setup, b.rank, b.seed);
  });

  if (!cfg.output_dir.empty()) {
    write_results_csv(cfg.output_dir / "results.csv", rows);
    const auto summary = report(rows);
    write_summary_csv(cfg.output_dir / "summary.csv", summary);
    write_summary_json(cfg.output_dir / "summary.json", summary);
  }
  return rows;
}

std::vector<SummaryRow> report(const std::vector<ResultRow>& rows) {
  using GroupKey = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<GroupKey, std::map<Index, std::pair<double, int>>> groups;
  for (const auto& row : rows) {
    auto& acc = groups[{row.machine, row.machine_id, row.snr,
                        row.setup}][row.rank];
    acc.first += row.auc;
    acc.second += 1;
  }

  std::vector<SummaryRow> summary;
  for (const auto& [key, by_rank] : groups) {
    SummaryRow s;
    std::tie(s.machine, s.machine_id, s.snr, s.setup) = key;
    bool first = true;
    for (const auto& [rank, acc] : by_rank) {
      const double mean = acc.first / acc.second;
      // Best mean a posteriori; ties keep the smaller rank.
      if (first || mean > s.mean_auc) {
        s.mean_auc = mean;
        s.best_rank = rank;
        first = false;
      }
    }
    summary.push_back(s);
  }
  return summary;
}

void write_results_csv(const fs::path& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << "machine,machine_id,snr,setup,K,seed,auc\n";
  for (const auto& r : rows) {
    out << r.machine << ',' << r.machine_id << ',' << r.snr << ',' << r.setup
        << ',';
    if (r.rank > 0) {
      out << r.rank;
    }
    out << ',' << r.seed << ',' << format_double(r.auc) << '\n';
  }
}

void write_summary_csv(const fs::path& path,
                       const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << "machine,machine_id,snr,setup,best_K,mean_auc\n";
  for (const auto& r : rows) {
    out << r.machine << ',' << r.machine_id << ',' << r.snr << ',' << r.setup
        << ',';
    if (r.best_rank > 0) {
      out << r.best_rank;
    }
    out << ',' << format_double(r.mean_auc) << '\n';
  }
}

void write_summary_json(const fs::path& path,
                        const std::vector<SummaryRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json obj;
    obj["machine"] = r.machine;
    obj["machine_id"] = r.machine_id;
    obj["snr"] = r.snr;
    obj["setup"] = r.setup;
    if (r.best_rank > 0) {
      obj["best_K"] = r.best_rank;
    } else {
      obj["best_K"] = nullptr;
    }
    obj["mean_auc"] = r.mean_auc;
    arr.push_back(obj);
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << arr.dump(2) << '\n';
}

}  // namespace specden
