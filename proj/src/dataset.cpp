// SPDX-License-Identifier: Apache-2.0
#include "specden/dataset.hpp"

#include <algorithm>
#include <stdexcept>

namespace specden {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> list_wavs(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("split_dataset: missing directory " + dir.string());
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  return out;
}

}  // namespace

DatasetSplit split_dataset(const DatasetLayout& layout) {
  const fs::path base = layout.machine_dir();
  std::vector<fs::path> normals = list_wavs(base / "normal");
  std::vector<fs::path> abnormals = list_wavs(base / "abnormal");

  if (abnormals.empty()) {
    throw std::runtime_error("split_dataset: no abnormal recordings under " +
                             base.string());
  }
  if (normals.size() <= abnormals.size()) {
    throw std::runtime_error(
        "split_dataset: need more normal than abnormal recordings to build "
        "the train split under " + base.string());
  }

  DatasetSplit split;
  const std::size_t n_train = normals.size() - abnormals.size();
  split.train_normal.assign(normals.begin(), normals.begin() + n_train);
  split.valid_normal.assign(normals.begin() + n_train, normals.end());
  split.valid_abnormal = std::move(abnormals);
  return split;
}

}  // namespace specden
