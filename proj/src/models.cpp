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

#include "riskcdf/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "riskcdf/error.hpp"
#include "riskcdf/rng.hpp"

namespace riskcdf {
namespace {

struct CrossEntropy {
  double loss;
  double dloss_dscore;
};

// Cross-entropy of a logit against a label in [0, 1], with the probability
// clamped to [floor, 1 - floor]. Inside the clamp the loss is evaluated in
// the overflow-free form max(s, 0) - y s + log(1 + exp(-|s|)); outside it the
// loss is constant in the score.
CrossEntropy LogisticCrossEntropy(double score, double y) {
  const double p = 1.0 / (1.0 + std::exp(-score));
  if (p < kProbabilityFloor || p > 1.0 - kProbabilityFloor) {
    const double pc = std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
    return {-(y * std::log(pc) + (1.0 - y) * std::log1p(-pc)), 0.0};
  }
  const double loss =
      std::max(score, 0.0) - y * score + std::log1p(std::exp(-std::abs(score)));
  return {loss, p - y};
}

std::size_t CountParameters(Architecture arch, std::size_t dim,
                            const std::vector<std::size_t>& hidden, bool bias) {
  if (arch != Architecture::kMlpTanh) return dim + (bias ? 1 : 0);
  std::size_t count = 0;
  std::size_t in = dim;
  for (std::size_t width : hidden) {
    count += width * in + width;
    in = width;
  }
  return count + in + 1;
}

}  // namespace

std::string_view ArchitectureName(Architecture arch) {
  switch (arch) {
    case Architecture::kLinearSquared: return "linear_squared";
    case Architecture::kLogisticCrossEntropy: return "logistic_crossentropy";
    case Architecture::kMlpTanh: return "mlp_tanh";
  }
  return "unknown";
}

Architecture ParseArchitecture(std::string_view name) {
  if (name == "linear" || name == "linear_squared") {
    return Architecture::kLinearSquared;
  }
  if (name == "logistic" || name == "logistic_crossentropy") {
    return Architecture::kLogisticCrossEntropy;
  }
  if (name == "mlp" || name == "mlp_tanh") return Architecture::kMlpTanh;
  throw Error(ErrorCode::kConfigError,
              "unknown architecture '" + std::string(name) + "'");
}

LossModel::LossModel(Architecture arch, std::size_t feature_dim,
                     std::vector<std::size_t> hidden, bool bias)
    : arch_(arch),
      feature_dim_(feature_dim),
      hidden_(std::move(hidden)),
      bias_(bias),
      theta_(CountParameters(arch_, feature_dim_, hidden_, bias_), 0.0) {}

LossModel LossModel::Linear(std::size_t feature_dim, bool bias) {
  return LossModel(Architecture::kLinearSquared, feature_dim, {}, bias);
}

LossModel LossModel::Logistic(std::size_t feature_dim, bool bias) {
  return LossModel(Architecture::kLogisticCrossEntropy, feature_dim, {}, bias);
}

LossModel LossModel::Mlp(std::size_t feature_dim,
                         std::vector<std::size_t> hidden) {
  if (hidden.empty() ||
      std::any_of(hidden.begin(), hidden.end(), [](auto w) { return w == 0; })) {
    throw Error(ErrorCode::kConfigError,
                "an MLP needs at least one hidden layer of positive width");
  }
  return LossModel(Architecture::kMlpTanh, feature_dim, std::move(hidden),
                   /*bias=*/true);
}

void LossModel::set_parameters(std::span<const double> theta) {
  if (theta.size() != theta_.size()) {
    std::ostringstream msg;
    msg << "expected " << theta_.size() << " parameters, got " << theta.size();
    throw Error(ErrorCode::kShapeError, msg.str());
  }
  std::copy(theta.begin(), theta.end(), theta_.begin());
}

LossModel LossModel::WithParameters(std::span<const double> theta) const {
  LossModel copy = *this;
  copy.set_parameters(theta);
  return copy;
}

void LossModel::CheckShape(const Example& z) const {
  if (z.x.size() != feature_dim_) {
    std::ostringstream msg;
    msg << "example has " << z.x.size() << " features, model expects "
        << feature_dim_;
    throw Error(ErrorCode::kShapeError, msg.str());
  }
}

double LossModel::Score(std::span<const double> x) const {
  if (x.size() != feature_dim_) {
    throw Error(ErrorCode::kShapeError, "feature dimension mismatch");
  }
  if (arch_ == Architecture::kMlpTanh) {
    std::vector<double> act(x.begin(), x.end());
    std::size_t offset = 0;
    for (std::size_t width : hidden_) {
      std::vector<double> next(width);
      const std::size_t in = act.size();
      for (std::size_t o = 0; o < width; ++o) {
        double s = theta_[offset + width * in + o];
        for (std::size_t i = 0; i < in; ++i) {
          s += theta_[offset + o * in + i] * act[i];
        }
        next[o] = std::tanh(s);
      }
      offset += width * in + width;
      act = std::move(next);
    }
    double s = theta_[offset + act.size()];
    for (std::size_t i = 0; i < act.size(); ++i) s += theta_[offset + i] * act[i];
    return s;
  }
  double s = bias_ ? theta_[feature_dim_] : 0.0;
  for (std::size_t i = 0; i < feature_dim_; ++i) s += theta_[i] * x[i];
  return s;
}

double LossModel::Loss(const Example& z) const {
  CheckShape(z);
  const double score = Score(z.x);
  if (arch_ == Architecture::kLinearSquared) {
    const double r = score - z.y;
    return r * r;
  }
  return LogisticCrossEntropy(score, z.y).loss;
}

double LossModel::LossAndGradient(const Example& z,
                                  std::span<double> grad) const {
  CheckShape(z);
  if (grad.size() != theta_.size()) {
    throw Error(ErrorCode::kShapeError, "gradient buffer has the wrong size");
  }
  if (arch_ == Architecture::kMlpTanh) return MlpForwardBackward(z, grad);

  const double score = Score(z.x);
  double loss;
  double dscore;
  if (arch_ == Architecture::kLinearSquared) {
    const double r = score - z.y;
    loss = r * r;
    dscore = 2.0 * r;
  } else {
    const CrossEntropy ce = LogisticCrossEntropy(score, z.y);
    loss = ce.loss;
    dscore = ce.dloss_dscore;
  }
  for (std::size_t i = 0; i < feature_dim_; ++i) grad[i] = dscore * z.x[i];
  if (bias_) grad[feature_dim_] = dscore;
  return loss;
}

double LossModel::MlpForwardBackward(const Example& z,
                                     std::span<double> grad) const {
  // Forward pass, keeping every layer's activations.
  std::vector<std::vector<double>> acts;
  acts.reserve(hidden_.size() + 1);
  acts.push_back(z.x);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (std::size_t width : hidden_) {
    const auto& in_act = acts.back();
    const std::size_t in = in_act.size();
    std::vector<double> out(width);
    for (std::size_t o = 0; o < width; ++o) {
      double s = theta_[offset + width * in + o];
      for (std::size_t i = 0; i < in; ++i) {
        s += theta_[offset + o * in + i] * in_act[i];
      }
      out[o] = std::tanh(s);
    }
    offsets.push_back(offset);
    offset += width * in + width;
    acts.push_back(std::move(out));
  }
  const auto& last = acts.back();
  double score = theta_[offset + last.size()];
  for (std::size_t i = 0; i < last.size(); ++i) {
    score += theta_[offset + i] * last[i];
  }
  const CrossEntropy ce = LogisticCrossEntropy(score, z.y);

  // Backward pass. delta holds d loss / d (pre-activation) of the current
  // layer; for the output layer that is d loss / d score.
  const double dscore = ce.dloss_dscore;
  for (std::size_t i = 0; i < last.size(); ++i) {
    grad[offset + i] = dscore * last[i];
  }
  grad[offset + last.size()] = dscore;

  std::vector<double> delta(last.size());
  for (std::size_t i = 0; i < last.size(); ++i) {
    delta[i] = dscore * theta_[offset + i] * (1.0 - last[i] * last[i]);
  }
  for (std::size_t layer = hidden_.size(); layer-- > 0;) {
    const std::size_t width = hidden_[layer];
    const auto& in_act = acts[layer];
    const std::size_t in = in_act.size();
    const std::size_t base = offsets[layer];
    for (std::size_t o = 0; o < width; ++o) {
      for (std::size_t i = 0; i < in; ++i) {
        grad[base + o * in + i] = delta[o] * in_act[i];
      }
      grad[base + width * in + o] = delta[o];
    }
    if (layer == 0) break;
    std::vector<double> prev(in, 0.0);
    for (std::size_t i = 0; i < in; ++i) {
      double s = 0.0;
      for (std::size_t o = 0; o < width; ++o) {
        s += theta_[base + o * in + i] * delta[o];
      }
      prev[i] = s * (1.0 - in_act[i] * in_act[i]);
    }
    delta = std::move(prev);
  }
  return ce.loss;
}

std::vector<double> LossModel::Gradient(const Example& z) const {
  std::vector<double> grad(theta_.size());
  LossAndGradient(z, grad);
  return grad;
}

LossModel InitializeUniform(LossModel model, std::uint64_t seed) {
  CounterRng rng(DeriveSeed(seed, "init"));
  std::vector<double> theta(model.num_parameters());
  for (double& v : theta) v = rng.Uniform(-0.5, 0.5);
  model.set_parameters(theta);
  return model;
}

double FiniteDifferenceCheck(const LossModel& model, const Example& z,
                             double step) {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::kConfigError, "finite-difference step must be > 0");
  }
  const std::vector<double> analytic = model.Gradient(z);
  std::vector<double> theta(model.parameters().begin(),
                            model.parameters().end());
  LossModel probe = model;
  double worst = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double saved = theta[j];
    theta[j] = saved + step;
    probe.set_parameters(theta);
    const double up = probe.Loss(z);
    theta[j] = saved - step;
    probe.set_parameters(theta);
    const double down = probe.Loss(z);
    theta[j] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double scale =
        std::max({1.0, std::abs(analytic[j]), std::abs(numeric)});
    worst = std::max(worst, std::abs(numeric - analytic[j]) / scale);
  }
  return worst;
}

ExampleLoss AsExampleLoss(LossModel model) {
  return [model = std::move(model)](const Example& z) { return model.Loss(z); };
}

nlohmann::json ModelToJson(const LossModel& model) {
  nlohmann::json j;
  j["architecture"] = std::string(ArchitectureName(model.architecture()));
  j["hyperparameters"] = {{"feature_dim", model.feature_dim()},
                          {"hidden", model.hidden()},
                          {"bias", model.bias()}};
  j["parameter_vector"] = std::vector<double>(model.parameters().begin(),
                                              model.parameters().end());
  return j;
}

LossModel ModelFromJson(const nlohmann::json& j) {
  try {
    const Architecture arch = ParseArchitecture(j.at("architecture").get<std::string>());
    const auto& hp = j.at("hyperparameters");
    const auto dim = hp.at("feature_dim").get<std::size_t>();
    LossModel model = [&] {
      switch (arch) {
        case Architecture::kLinearSquared:
          return LossModel::Linear(dim, hp.value("bias", true));
        case Architecture::kLogisticCrossEntropy:
          return LossModel::Logistic(dim, hp.value("bias", true));
        case Architecture::kMlpTanh:
          return LossModel::Mlp(dim, hp.at("hidden").get<std::vector<std::size_t>>());
      }
      throw Error(ErrorCode::kConfigError, "unknown architecture");
    }();
    model.set_parameters(j.at("parameter_vector").get<std::vector<double>>());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad checkpoint: ") + e.what());
  }
}

}  // namespace riskcdf
