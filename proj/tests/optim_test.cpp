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

#include "riskcdf/optim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "riskcdf/data.hpp"
#include "test_util.hpp"

namespace riskcdf {
namespace {

// Linear model theta = [1], y = 0: loss is x^2, so x = sqrt(k) gives loss k.
std::vector<Example> OneToFourExamples() {
  return {{{1.0}, 0.0}, {{std::sqrt(2.0)}, 0.0}, {{std::sqrt(3.0)}, 0.0},
          {{2.0}, 0.0}};
}

LossModel UnitLinear() {
  auto model = LossModel::Linear(1, /*bias=*/false);
  model.set_parameters(std::vector<double>{1.0});
  return model;
}

std::vector<Example> SmallBlobs(std::uint64_t seed) {
  BlobConfig config = BlobConfig::ToyPreset();
  config.sizes = {60, 10};
  return GenerateBlobs(config, seed).examples;
}

TEST(EmpiricalRiskTest, DocumentedExamples) {
  const auto data = OneToFourExamples();
  EXPECT_NEAR(EmpiricalDistortionRisk(UnitLinear(), data, DistortionSpec::Identity()),
              2.5, 1e-12);
  EXPECT_NEAR(EmpiricalDistortionRisk(UnitLinear(), data, DistortionSpec::Cvar(0.5)),
              3.5, 1e-12);
}

TEST(EmpiricalRiskTest, SortingPermutationIsStable) {
  const std::vector<double> losses = {2, 1, 2, 0};
  EXPECT_EQ(SortingPermutation(losses), (std::vector<std::size_t>{3, 1, 0, 2}));
}

TEST(DistortionGradientTest, IdentityEqualsMeanGradient) {
  const auto data = SmallBlobs(4);
  const auto model = InitializeUniform(LossModel::Mlp(2, {4}), 8);
  const auto rg = DistortionGradient(model, data, DistortionSpec::Identity());
  std::vector<double> mean(model.num_parameters(), 0.0);
  for (const auto& z : data) {
    const auto g = model.Gradient(z);
    for (std::size_t j = 0; j < g.size(); ++j) mean[j] += g[j] / data.size();
  }
  for (std::size_t j = 0; j < mean.size(); ++j) {
    EXPECT_NEAR(rg.gradient[j], mean[j], 1e-12);
  }
}

TEST(DistortionGradientTest, CvarEqualsMeanGradientOfUpperTail) {
  const auto data = SmallBlobs(5);
  const auto model = InitializeUniform(LossModel::Logistic(2), 3);
  const double alpha = 0.2;  // 14 of 70 points
  const auto rg = DistortionGradient(model, data, DistortionSpec::Cvar(alpha));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.Loss(data[a]) > model.Loss(data[b]);
  });
  std::vector<double> tail(model.num_parameters(), 0.0);
  double tail_risk = 0.0;
  for (std::size_t i = 0; i < 14; ++i) {
    const auto g = model.Gradient(data[order[i]]);
    for (std::size_t j = 0; j < g.size(); ++j) tail[j] += g[j] / 14.0;
    tail_risk += model.Loss(data[order[i]]) / 14.0;
  }
  EXPECT_NEAR(rg.risk, tail_risk, 1e-12);
  for (std::size_t j = 0; j < tail.size(); ++j) {
    EXPECT_NEAR(rg.gradient[j], tail[j], 1e-12);
  }
  const auto threaded = DistortionGradient(model, data, DistortionSpec::Cvar(alpha), 3);
  EXPECT_EQ(threaded.gradient, rg.gradient);
}

TEST(NoisyGdStepTest, DocumentedExample) {
  EXPECT_EQ(NoisyGdStep(std::vector<double>{0.0}, std::vector<double>{2.0}, 0.5,
                        nullptr),
            (std::vector<double>{-1.0}));
}

TEST(TrainTest, ZeroLearningRateGivesFlatTrace) {
  TrainConfig config;
  config.eta = 0.0;
  config.iterations = 25;
  config.seed = 3;
  const auto model = InitializeUniform(LossModel::Logistic(2), 1);
  const auto trace = Train(model, SmallBlobs(1), config);
  ASSERT_EQ(trace.records.size(), 25u);
  for (const auto& r : trace.records) EXPECT_EQ(r.risk, trace.records[0].risk);
  EXPECT_EQ(trace.final_parameters, trace.initial_parameters);
}

TEST(TrainTest, QuadraticConvergesGeometricallyWithoutNoise) {
  // loss = theta^2, gradient 2 theta; eta = 0.25 halves theta each step.
  TrainConfig config;
  config.eta = 0.25;
  config.iterations = 30;
  config.noise_enabled = false;
  const std::vector<Example> data = {{{1.0}, 0.0}};
  const auto trace = Train(UnitLinear(), data, config);
  for (std::size_t t = 0; t < trace.records.size(); ++t) {
    EXPECT_DOUBLE_EQ(trace.records[t].risk, std::pow(0.25, static_cast<double>(t)));
  }
  EXPECT_DOUBLE_EQ(trace.final_parameters[0], std::pow(0.5, 30.0));
}

TEST(TrainTest, BitReproducibleForSeedAndThreadCount) {
  TrainConfig config;
  config.eta = 0.05;
  config.iterations = 40;
  config.seed = 77;
  config.distortion = DistortionSpec::Cvar(0.25);
  const auto model = InitializeUniform(LossModel::Mlp(2, {4}), 2);
  const auto data = SmallBlobs(2);
  const auto a = Train(model, data, config);
  const auto b = Train(model, data, config);
  config.threads = 3;
  const auto c = Train(model, data, config);
  EXPECT_EQ(a.final_parameters, b.final_parameters);
  EXPECT_EQ(a.final_parameters, c.final_parameters);
  config.seed = 78;
  EXPECT_NE(Train(model, data, config).final_parameters, a.final_parameters);
}

TEST(TrainTest, DivergenceKeepsPartialTrace) {
  TrainConfig config;
  config.eta = 10.0;  // theta <- -19 theta
  config.iterations = 100;
  config.noise_enabled = false;
  const std::vector<Example> data = {{{1.0}, 0.0}};
  try {
    Train(UnitLinear(), data, config);
    ADD_FAILURE() << "expected divergence";
  } catch (const DivergedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDiverged);
    const auto& partial = e.partial_trace();
    ASSERT_FALSE(partial.records.empty());
    EXPECT_LT(partial.records.size(), 100u);
    EXPECT_GT(partial.records.back().risk, kDivergenceThreshold);
  }
}

TEST(TrainConfigTest, ResolvesLearningRate) {
  TrainConfig config;
  config.iterations = 100;
  EXPECT_RISKCDF_ERROR(config.ResolvedEta(), kConfigError);
  config.beta = 2.0;
  EXPECT_DOUBLE_EQ(config.ResolvedEta(), 1.0 / 20.0);
  config.eta = -1.0;
  EXPECT_RISKCDF_ERROR(config.ResolvedEta(), kConfigError);
  config.eta = 0.3;
  EXPECT_EQ(config.ResolvedEta(), 0.3);
  config.iterations = 0;
  EXPECT_RISKCDF_ERROR(config.ResolvedEta(), kConfigError);
}

TEST(StationarityTest, ZeroGradientAtStart) {
  TrainConfig config;
  config.eta = 0.1;
  config.iterations = 10;
  const std::vector<Example> data = {{{1.0, 2.0}, 0.0}, {{-1.0, 0.5}, 0.0}};
  const auto trace = Train(LossModel::Linear(2), data, config);
  // Zero parameters fit y = 0 exactly; only the noise moves theta.
  EXPECT_EQ(trace.records[0].grad_norm, 0.0);
  const auto report = Stationarity(trace, 1.0);
  EXPECT_TRUE(report.holds);
  EXPECT_TRUE(report.best_risk_is_surrogate);
  EXPECT_FALSE(report.beta_estimated);
  EXPECT_RISKCDF_ERROR(Stationarity(trace, 0.0), kConfigError);
}

TEST(StationarityTest, BoundShrinksAsIterationsGrow) {
  const std::vector<Example> data = {{{1.0}, 0.0}, {{0.5}, 0.0}};
  double previous_bound = 1e300;
  double previous_avg = 1e300;
  for (std::size_t t : {50u, 200u, 800u}) {
    TrainConfig config;
    config.beta = 2.0;  // loss 0.5 * 2 * theta^2 on average: smooth with 2
    config.iterations = t;
    config.noise_enabled = false;
    const auto trace = Train(UnitLinear(), data, config);
    const auto report = Stationarity(trace, 2.0);
    EXPECT_TRUE(report.holds);
    EXPECT_LT(report.bound, previous_bound);
    EXPECT_LT(report.average_sq_grad_norm, previous_avg);
    EXPECT_GT(report.first_decile_mean, report.last_decile_mean);
    previous_bound = report.bound;
    previous_avg = report.average_sq_grad_norm;
  }
}

TEST(StationarityTest, EstimatesBetaFromSnapshots) {
  TrainConfig config;
  config.eta = 0.1;
  config.iterations = 20;
  config.noise_enabled = false;
  const std::vector<Example> data = {{{1.0}, 0.0}};
  const auto trace = Train(UnitLinear(), data, config);
  const auto beta = EstimateBeta(trace);
  ASSERT_TRUE(beta.has_value());
  EXPECT_NEAR(*beta, 2.0, 1e-9);  // gradient 2 theta
  EXPECT_TRUE(Stationarity(trace).beta_estimated);
}

TEST(GradCheckTest, DirectionalDerivativesMatch) {
  GradCheckOptions options;
  options.trials = 20;
  options.seed = 4;
  options.architecture = Architecture::kLinearSquared;
  EXPECT_LE(DirectionalGradientCheck(options).max_relative_error, 1e-7);
  options.architecture = Architecture::kLogisticCrossEntropy;
  options.distortion = DistortionSpec::Cvar(0.1);
  EXPECT_LE(DirectionalGradientCheck(options).max_relative_error, 1e-4);
  options.architecture = Architecture::kMlpTanh;
  options.distortion = DistortionSpec::Cvar(0.25);
  const auto result = DirectionalGradientCheck(options);
  EXPECT_LE(result.max_relative_error, 1e-4);
  EXPECT_EQ(result.trials, 20u);
}

TEST(TraceCsvTest, WritesHeaderAndRows) {
  TrainConfig config;
  config.eta = 0.25;
  config.iterations = 2;
  config.noise_enabled = false;
  const std::vector<Example> data = {{{1.0}, 0.0}};
  std::ostringstream out;
  WriteTraceCsv(Train(UnitLinear(), data, config), out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "t,risk,grad_norm,avg_sq_grad_norm");
  EXPECT_NE(out.str().find("\n1,1,2,4\n"), std::string::npos);
}

}  // namespace
}  // namespace riskcdf
