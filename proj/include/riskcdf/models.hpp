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

#ifndef RISKCDF_MODELS_HPP_
#define RISKCDF_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace riskcdf {

struct Example {
  std::vector<double> x;
  double y = 0.0;  // real target, or 0/1 class label
};

enum class Architecture { kLinearSquared, kLogisticCrossEntropy, kMlpTanh };

std::string_view ArchitectureName(Architecture arch);
/// Accepts "linear", "logistic", "mlp" and the full tag names.
Architecture ParseArchitecture(std::string_view name);

/// Probabilities are clamped to [kProbabilityFloor, 1 - kProbabilityFloor]
/// inside the cross-entropy.
inline constexpr double kProbabilityFloor = 1e-12;

/// A parameterized predictor with a nonnegative per-example loss.
///
/// Parameter layout (theta):
///   linear / logistic: [w_1 .. w_d, b]   (b only when bias is enabled)
///   mlp: for each hidden layer, its weight matrix (row-major, out x in)
///        followed by its bias; then the output weights and output bias.
class LossModel {
 public:
  static LossModel Linear(std::size_t feature_dim, bool bias = true);
  static LossModel Logistic(std::size_t feature_dim, bool bias = true);
  static LossModel Mlp(std::size_t feature_dim, std::vector<std::size_t> hidden);

  Architecture architecture() const { return arch_; }
  std::size_t feature_dim() const { return feature_dim_; }
  const std::vector<std::size_t>& hidden() const { return hidden_; }
  bool bias() const { return bias_; }
  std::size_t num_parameters() const { return theta_.size(); }

  std::span<const double> parameters() const { return theta_; }
  /// Throws ShapeError on a size mismatch.
  void set_parameters(std::span<const double> theta);
  LossModel WithParameters(std::span<const double> theta) const;

  /// Raw model output: the prediction (linear) or the logit.
  double Score(std::span<const double> x) const;
  double Loss(const Example& z) const;
  /// Writes d loss / d theta into `grad` (size num_parameters()) and
  /// returns the loss.
  double LossAndGradient(const Example& z, std::span<double> grad) const;
  std::vector<double> Gradient(const Example& z) const;

 private:
  LossModel(Architecture arch, std::size_t feature_dim,
            std::vector<std::size_t> hidden, bool bias);

  void CheckShape(const Example& z) const;
  double MlpForwardBackward(const Example& z, std::span<double> grad) const;

  Architecture arch_;
  std::size_t feature_dim_;
  std::vector<std::size_t> hidden_;
  bool bias_;
  std::vector<double> theta_;
};

/// Draws every parameter uniformly from [-0.5, 0.5].
LossModel InitializeUniform(LossModel model, std::uint64_t seed);

/// Largest coordinate-wise error between central differences with `step` and
/// the analytic gradient, each scaled by max(1, |analytic|, |numeric|).
double FiniteDifferenceCheck(const LossModel& model, const Example& z,
                             double step);

/// Per-example loss of a fixed hypothesis.
using ExampleLoss = std::function<double(const Example&)>;
ExampleLoss AsExampleLoss(LossModel model);

nlohmann::json ModelToJson(const LossModel& model);
LossModel ModelFromJson(const nlohmann::json& j);

}  // namespace riskcdf

#endif  // RISKCDF_MODELS_HPP_
