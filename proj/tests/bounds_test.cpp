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

#include "riskcdf/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"

namespace riskcdf {
namespace {

TEST(McDiarmidTest, DocumentedExamples) {
  EXPECT_EQ(McDiarmidTerm(10, 1.0), 0.0);
  EXPECT_NEAR(McDiarmidTerm(50, std::exp(-100.0)), 1.0, 1e-12);
  EXPECT_NEAR(McDiarmidTerm(100000, 0.05), 0.003870, 5e-7);
  EXPECT_RISKCDF_ERROR(McDiarmidTerm(10, 0.0), kInvalidDelta);
  EXPECT_RISKCDF_ERROR(McDiarmidTerm(10, 1.5), kInvalidDelta);
  EXPECT_RISKCDF_ERROR(McDiarmidTerm(0, 0.1), kConfigError);
}

TEST(RademacherTest, DocumentedExamples) {
  EXPECT_NEAR(RademacherFiniteClass(100, 5), 0.12239, 5e-6);
  EXPECT_NEAR(RademacherFiniteClass(50000, 5), 0.005473, 5e-7);
  EXPECT_NEAR(RademacherPermutation(200, 4), 0.08326, 5e-6);
  EXPECT_NEAR(RademacherGrowth(100, FiniteClassGrowth(100, 5)), 0.4990, 5e-5);
  EXPECT_NEAR(VcSauerCertificate(100, 3, 0.1).rademacher_bound, 0.744187, 5e-7);
  EXPECT_RISKCDF_ERROR(RademacherGrowth(100, 0.5), kInvalidGrowth);
  EXPECT_EQ(RademacherGrowth(100, 1.0), 0.0);
}

TEST(CertificateTest, EpsilonSpotValues) {
  EXPECT_NEAR(FiniteClassCertificate(100, 5, 0.1).epsilon, 0.352073, 5e-7);
  EXPECT_NEAR(FiniteClassCertificate(50000, 5, 0.05).epsilon, 0.01642, 5e-6);
  const auto cert = PermutationCertificate(200, 4, 0.1);
  EXPECT_DOUBLE_EQ(cert.epsilon,
                   2.0 * std::sqrt(std::log(16.0) / 400.0) +
                       std::sqrt(std::log(10.0) / 400.0));
  EXPECT_EQ(cert.inputs.at("n_pi"), 4.0);
  EXPECT_EQ(UserSuppliedCertificate(10, 0.1, 0.3).epsilon, 0.3);
}

TEST(CertificateTest, RiskErrorTransfers) {
  const auto cert = UserSuppliedCertificate(100, 0.05, 0.0164);
  EXPECT_DOUBLE_EQ(RiskErrorBound(cert, 20.0), 0.328);
  EXPECT_NEAR(WassersteinRiskErrorBound(UserSuppliedCertificate(10, 0.1, 0.02),
                                        1.0, 2.0, 0.5),
              0.2, 1e-12);
  EXPECT_DOUBLE_EQ(ExcessRiskBound(0.328), 0.656);
  EXPECT_EQ(WassersteinRiskErrorBound(UserSuppliedCertificate(10, 0.1, 0.0), 3.0,
                                      2.0, 0.5),
            0.0);
}

TEST(CertificateTest, SerializesToJson) {
  const auto j = CertificateToJson(FiniteClassCertificate(100, 5, 0.1));
  EXPECT_EQ(j.at("method"), "finite_class");
  EXPECT_EQ(j.at("n"), 100);
  EXPECT_NEAR(j.at("epsilon").get<double>(), 0.352073, 5e-7);
  EXPECT_EQ(ParseBoundMethod("vc_sauer"), BoundMethod::kVcSauer);
  EXPECT_RISKCDF_ERROR(ParseBoundMethod("nope"), kConfigError);
}

TEST(BoundPropertyTest, MonotoneInSampleSizeDeltaAndClassSize) {
  for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
    for (double delta : {0.01, 0.05, 0.2}) {
      for (std::size_t k : {1u, 2u, 10u, 100u}) {
        const double e = FiniteClassCertificate(n, k, delta).epsilon;
        EXPECT_GT(e, FiniteClassCertificate(2 * n, k, delta).epsilon);
        EXPECT_GT(e, FiniteClassCertificate(n, k, 2 * delta).epsilon);
        EXPECT_LT(e, FiniteClassCertificate(n, 2 * k, delta).epsilon);
      }
    }
  }
}

TEST(BoundPropertyTest, FiniteClassTighterThanGrowthPreset) {
  for (std::size_t n : {100u, 1000u, 10000u}) {
    for (std::size_t k : {2u, 10u, 100u}) {
      EXPECT_LT(RademacherFiniteClass(n, k),
                RademacherGrowth(n, FiniteClassGrowth(n, k)));
    }
  }
}

TEST(MonteCarloEnTest, ConstantLossGivesZeroDeviation) {
  const std::vector<ExampleLoss> hyps = {[](const Example&) { return 0.7; },
                                         [](const Example&) { return 0.0; }};
  MonteCarloEnOptions options;
  options.reference_size = 500;
  options.n = 50;
  options.reps = 20;
  options.seed = 3;
  const auto result =
      MonteCarloEn(hyps, BlobMixtureGenerator(BlobConfig::ToyPreset()), options);
  ASSERT_EQ(result.e_n.size(), 20u);
  for (double e : result.e_n) EXPECT_EQ(e, 0.0);
  EXPECT_EQ(result.ViolationFraction(0.0), 0.0);
}

TEST(MonteCarloEnTest, DeterministicAcrossThreadCounts) {
  const auto model = InitializeUniform(LossModel::Logistic(2), 11);
  const std::vector<ExampleLoss> hyps = {AsExampleLoss(model)};
  MonteCarloEnOptions options;
  options.reference_size = 2000;
  options.n = 100;
  options.reps = 30;
  options.seed = 9;
  const auto generator = BlobMixtureGenerator(BlobConfig::ToyPreset());
  const auto one = MonteCarloEn(hyps, generator, options);
  options.threads = 3;
  const auto three = MonteCarloEn(hyps, generator, options);
  EXPECT_EQ(one.e_n, three.e_n);
  for (double e : one.e_n) {
    EXPECT_GT(e, 0.0);
    EXPECT_LE(e, 1.0);
  }
  // With a single hypothesis the finite-class certificate holds with room.
  EXPECT_LE(one.ViolationFraction(FiniteClassCertificate(100, 1, 0.1).epsilon),
            0.1);
}

}  // namespace
}  // namespace riskcdf
