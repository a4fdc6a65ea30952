// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace specden {

/// Locates one machine's recordings under the MIMII-style layout
/// <root>/<snr>/<machine>/<machine_id>/{normal,abnormal}/*.wav.
struct DatasetLayout {
  std::filesystem::path root;
  std::string machine;     ///< e.g. fan, pump, valve, slider
  std::string machine_id;  ///< e.g. id_00
  std::string snr_tag;     ///< e.g. 0dB, min6dB

  std::filesystem::path machine_dir() const {
    return root / snr_tag / machine / machine_id;
  }
};

struct DatasetSplit {
  std::vector<std::filesystem::path> train_normal;
  std::vector<std::filesystem::path> valid_normal;
  std::vector<std::filesystem::path> valid_abnormal;
};

/// Deterministic split: every abnormal recording goes to validation; the
/// last M normal recordings in filename order (M = abnormal count) become
/// the validation normals, the rest train. Training therefore contains
/// normal recordings only, and validation holds equal class counts.
DatasetSplit split_dataset(const DatasetLayout& layout);

}  // namespace specden
