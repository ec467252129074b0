// Copyright 2026 The riskcdf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISKCDF_DATA_HPP_
#define RISKCDF_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskcdf/cdf.hpp"
#include "riskcdf/models.hpp"

namespace riskcdf {

struct Dataset {
  std::vector<Example> examples;
  /// {source, seed, generator parameters, ...}; written as a sidecar file.
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t size() const { return examples.size(); }
  std::size_t feature_dim() const {
    return examples.empty() ? 0 : examples.front().x.size();
  }
};

/// Isotropic Gaussian clusters; cluster k has sizes[k] points labeled k.
struct BlobConfig {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<double>> centers;
  std::vector<double> stds;

  /// Two clusters: 1000 points around (0, 0) with std 1.5 and 50 points
  /// around (1, 1) with std 0.5.
  static BlobConfig ToyPreset();
};

/// Points are emitted cluster by cluster (no shuffling). Coordinates come from
/// Box-Muller draws of a counter-based generator keyed by `seed`, so the
/// output is identical across platforms. Throws ConfigError on inconsistent
/// configuration.
Dataset GenerateBlobs(const BlobConfig& config, std::uint64_t seed);

/// n i.i.d. draws from the blob mixture, with cluster probabilities
/// proportional to `sizes`.
Dataset SampleBlobMixture(const BlobConfig& config, std::size_t n,
                          std::uint64_t seed);

/// Draws a fresh dataset of n points from a fixed distribution.
using DataGenerator = std::function<Dataset(std::size_t n, std::uint64_t seed)>;

DataGenerator BlobMixtureGenerator(BlobConfig config);

struct DatasetCsvOptions {
  bool has_header = true;
  /// Header name of the label column. With no header, the label column is
  /// given by `label_index` instead.
  std::string label_column = "y";
  std::size_t label_index = 0;
};

/// Features are taken from the remaining columns in file order. Throws
/// FormatError naming the row and column of any unparsable cell.
Dataset LoadDatasetCsv(const std::filesystem::path& path,
                       const DatasetCsvOptions& options);

/// Writes a header "x0,...,x{d-1},y" and writes the metadata sidecar to
/// `path` + ".meta.json".
void SaveDatasetCsv(const Dataset& dataset, const std::filesystem::path& path);

/// Loss samples of several models on the same evaluation instances.
struct LossTable {
  std::vector<std::string> models;
  std::vector<std::vector<double>> columns;  // columns[m][row]

  std::size_t num_rows() const { return columns.empty() ? 0 : columns[0].size(); }
  EmpiricalCdf ColumnCdf(std::size_t m) const {
    return EmpiricalCdf::FromLosses(columns[m]);
  }
};

/// Header row of model names is required. Throws FormatError for ragged rows
/// or unparsable cells and InvalidLoss for negative or non-finite losses.
LossTable LoadLossTable(const std::filesystem::path& path);

}  // namespace riskcdf

#endif  // RISKCDF_DATA_HPP_
