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

#include "riskcdf/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "riskcdf/csv.hpp"
#include "riskcdf/error.hpp"
#include "riskcdf/rng.hpp"

namespace riskcdf {
namespace {

void ValidateBlobs(const BlobConfig& config) {
  const std::size_t k = config.sizes.size();
  if (k == 0 || config.centers.size() != k || config.stds.size() != k) {
    throw Error(ErrorCode::kConfigError,
                "sizes, centers and stds must have the same nonzero length");
  }
  const std::size_t dim = config.centers.front().size();
  for (std::size_t c = 0; c < k; ++c) {
    if (config.centers[c].size() != dim || dim == 0) {
      throw Error(ErrorCode::kConfigError,
                  "all centers must share one positive dimension");
    }
    if (!(config.stds[c] > 0.0)) {
      throw Error(ErrorCode::kConfigError, "cluster stds must be positive");
    }
  }
}

nlohmann::json BlobParameters(const BlobConfig& config) {
  return {{"sizes", config.sizes},
          {"centers", config.centers},
          {"stds", config.stds}};
}

Example DrawPoint(const BlobConfig& config, std::size_t cluster,
                  CounterRng& rng) {
  Example z;
  z.x.reserve(config.centers[cluster].size());
  for (double c : config.centers[cluster]) {
    z.x.push_back(rng.Gaussian(c, config.stds[cluster]));
  }
  z.y = static_cast<double>(cluster);
  return z;
}

}  // namespace

BlobConfig BlobConfig::ToyPreset() {
  return {{1000, 50}, {{0.0, 0.0}, {1.0, 1.0}}, {1.5, 0.5}};
}

Dataset GenerateBlobs(const BlobConfig& config, std::uint64_t seed) {
  ValidateBlobs(config);
  CounterRng rng(DeriveSeed(seed, "blobs"));
  Dataset out;
  for (std::size_t c = 0; c < config.sizes.size(); ++c) {
    for (std::size_t i = 0; i < config.sizes[c]; ++i) {
      out.examples.push_back(DrawPoint(config, c, rng));
    }
  }
  out.metadata = {{"source", "blobs"},
                  {"seed", seed},
                  {"parameters", BlobParameters(config)}};
  return out;
}

Dataset SampleBlobMixture(const BlobConfig& config, std::size_t n,
                          std::uint64_t seed) {
  ValidateBlobs(config);
  const auto total = static_cast<double>(
      std::accumulate(config.sizes.begin(), config.sizes.end(), std::size_t{0}));
  if (total == 0.0) {
    throw Error(ErrorCode::kConfigError, "blob sizes must not all be zero");
  }
  std::vector<double> cumulative;
  double acc = 0.0;
  for (std::size_t s : config.sizes) {
    acc += static_cast<double>(s) / total;
    cumulative.push_back(acc);
  }
  CounterRng rng(DeriveSeed(seed, "blob_mixture"));
  Dataset out;
  out.examples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    const auto cluster = std::min<std::size_t>(
        static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) -
            cumulative.begin()),
        config.sizes.size() - 1);
    out.examples.push_back(DrawPoint(config, cluster, rng));
  }
  out.metadata = {{"source", "blob_mixture"},
                  {"seed", seed},
                  {"n", n},
                  {"parameters", BlobParameters(config)}};
  return out;
}

DataGenerator BlobMixtureGenerator(BlobConfig config) {
  ValidateBlobs(config);
  return [config = std::move(config)](std::size_t n, std::uint64_t seed) {
    return SampleBlobMixture(config, n, seed);
  };
}

Dataset LoadDatasetCsv(const std::filesystem::path& path,
                       const DatasetCsvOptions& options) {
  const CsvTable table = ReadCsv(path, options.has_header);
  std::size_t label = options.label_index;
  if (options.has_header) {
    const auto it = std::find(table.header.begin(), table.header.end(),
                              options.label_column);
    if (it == table.header.end()) {
      throw Error(ErrorCode::kFormatError,
                  path.string() + ": no label column '" + options.label_column +
                      "' in header");
    }
    label = static_cast<std::size_t>(it - table.header.begin());
  }
  const std::size_t width =
      options.has_header ? table.header.size()
                         : (table.rows.empty() ? 0 : table.rows.front().size());
  if (label >= width && !table.rows.empty()) {
    throw Error(ErrorCode::kFormatError,
                path.string() + ": label column index out of range");
  }
  const std::size_t first_row = options.has_header ? 2 : 1;
  Dataset out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != width) {
      std::ostringstream msg;
      msg << path.string() << ": row " << r + first_row << " has "
          << row.size() << " columns, expected " << width;
      throw Error(ErrorCode::kFormatError, msg.str());
    }
    Example z;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double v = ParseCell(row[c], r + first_row, c + 1);
      if (c == label) {
        z.y = v;
      } else {
        z.x.push_back(v);
      }
    }
    out.examples.push_back(std::move(z));
  }
  out.metadata = {{"source", path.string()}};
  return out;
}

void SaveDatasetCsv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ostringstream out;
  const std::size_t dim = dataset.feature_dim();
  for (std::size_t i = 0; i < dim; ++i) out << 'x' << i << ',';
  out << "y\n";
  for (const auto& z : dataset.examples) {
    for (double v : z.x) out << FormatDouble(v) << ',';
    out << FormatDouble(z.y) << '\n';
  }
  WriteTextFile(path, out.str());
  WriteTextFile(path.string() + ".meta.json", dataset.metadata.dump(2) + "\n");
}

LossTable LoadLossTable(const std::filesystem::path& path) {
  const CsvTable table = ReadCsv(path, /*has_header=*/true);
  if (table.header.empty()) {
    throw Error(ErrorCode::kFormatError,
                path.string() + ": a header row of model names is required");
  }
  LossTable out;
  out.models = table.header;
  out.columns.assign(out.models.size(), {});
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != out.models.size()) {
      std::ostringstream msg;
      msg << path.string() << ": row " << r + 2 << " has " << row.size()
          << " columns, expected " << out.models.size();
      throw Error(ErrorCode::kFormatError, msg.str());
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double v = ParseCell(row[c], r + 2, c + 1);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream msg;
        msg << path.string() << ": row " << r + 2 << ", column " << c + 1
            << " (" << out.models[c] << ") holds invalid loss " << v;
        throw Error(ErrorCode::kInvalidLoss, msg.str());
      }
      out.columns[c].push_back(v);
    }
  }
  if (table.rows.empty()) {
    throw Error(ErrorCode::kEmptySample, path.string() + ": no loss rows");
  }
  return out;
}

}  // namespace riskcdf
