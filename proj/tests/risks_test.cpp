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

#include "riskcdf/risks.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "riskcdf/rng.hpp"
#include "test_util.hpp"

namespace riskcdf {
namespace {

EmpiricalCdf Cdf(std::vector<double> v) { return EmpiricalCdf::FromLosses(v); }

const EmpiricalCdf& OneToFour() {
  static const EmpiricalCdf cdf = Cdf({1, 2, 3, 4});
  return cdf;
}

// Mean of the k largest values.
double TopMean(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return std::accumulate(v.begin(), v.begin() + k, 0.0) / static_cast<double>(k);
}

TEST(DistortionRiskTest, DocumentedExamples) {
  EXPECT_DOUBLE_EQ(DistortionRisk(OneToFour(), DistortionSpec::Identity()).value, 2.5);
  EXPECT_DOUBLE_EQ(DistortionRisk(OneToFour(), DistortionSpec::Cvar(0.5)).value, 3.5);
  const auto sup = DistortionSpec::Custom(
      "sup", [](double t) { return t > 0.0 ? 1.0 : 0.0; }, 0.0);
  EXPECT_DOUBLE_EQ(DistortionRisk(OneToFour(), sup).value, 4.0);
}

TEST(DistortionRiskTest, LipschitzConstantScalesWithSupport) {
  const auto mean = DistortionRisk(OneToFour(), DistortionSpec::Identity(), 10.0);
  EXPECT_EQ(mean.holder.lipschitz, 10.0);
  EXPECT_EQ(mean.holder.kind, ConstantKind::kClosedForm);
  const auto cvar = Cvar(OneToFour(), 0.05, 1.0 * 4);
  EXPECT_DOUBLE_EQ(cvar.holder.lipschitz, 4.0 / 0.05);
  // Default support bound is the sample maximum.
  EXPECT_EQ(DistortionRisk(OneToFour(), DistortionSpec::Identity()).holder.lipschitz,
            4.0);
  EXPECT_RISKCDF_ERROR(DistortionRisk(OneToFour(), DistortionSpec::Identity(), 3.0),
                       kSupportViolation);
}

TEST(DistortionSpecTest, ValidatesShape) {
  EXPECT_RISKCDF_ERROR(
      DistortionSpec::Custom("bad0", [](double t) { return 0.5 + 0.5 * t; }),
      kInvalidDistortion);
  EXPECT_RISKCDF_ERROR(
      DistortionSpec::Custom("bad1", [](double t) { return 0.9 * t; }),
      kInvalidDistortion);
  EXPECT_RISKCDF_ERROR(
      DistortionSpec::Custom("dip", [](double t) { return t < 0.5 ? t : t * t; }),
      kInvalidDistortion);
  const auto sq = DistortionSpec::Custom("sqrt", [](double t) { return std::sqrt(t); });
  EXPECT_EQ(sq.lipschitz_kind(), ConstantKind::kEstimated);
  EXPECT_GT(sq.lipschitz(), 50.0);
}

TEST(DistortionSpecTest, TableInterpolatesAndLoadsFromCsv) {
  const auto table = DistortionSpec::FromTable({{0, 0}, {0.5, 0.8}, {1, 1}}, "t");
  EXPECT_DOUBLE_EQ(table(0.25), 0.4);
  EXPECT_DOUBLE_EQ(table(0.75), 0.9);
  EXPECT_DOUBLE_EQ(table.lipschitz(), 1.6);
  const auto dir = testing::ScratchDir();
  const auto path = testing::WriteFile(dir / "g.csv", "t,g\n0,0\n0.5,0.8\n1,1\n");
  const auto loaded = DistortionSpec::FromCsv(path.string());
  EXPECT_DOUBLE_EQ(loaded(0.25), 0.4);
  EXPECT_RISKCDF_ERROR(DistortionSpec::FromTable({{0, 0}, {0.5, 0.9}, {1, 0.8}}, "x"),
                       kInvalidDistortion);
}

TEST(CvarTest, DocumentedExamples) {
  EXPECT_DOUBLE_EQ(Cvar(OneToFour(), 1.0).value, 2.5);
  EXPECT_DOUBLE_EQ(Cvar(OneToFour(), 0.25).value, 4.0);
  EXPECT_DOUBLE_EQ(Cvar(OneToFour(), 0.5).value, 3.5);
  EXPECT_RISKCDF_ERROR(Cvar(OneToFour(), 0.0), kInvalidAlpha);
  EXPECT_RISKCDF_ERROR(Cvar(OneToFour(), 1.5), kInvalidAlpha);
}

TEST(SpectralRiskTest, DocumentedExamples) {
  EXPECT_DOUBLE_EQ(SpectralRisk(OneToFour(), SpectrumSpec::Uniform()).value, 2.5);
  const auto step = SpectrumSpec::Custom(
      "step", [](double u) { return u >= 0.5 ? 2.0 : 0.0; },
      [](double u) { return 2.0 * std::max(u - 0.5, 0.0); });
  EXPECT_DOUBLE_EQ(SpectralRisk(OneToFour(), step).value, 3.5);
  EXPECT_DOUBLE_EQ(SpectralRisk(Cdf({1.25, 1.25, 1.25}), SpectrumSpec::Uniform()).value,
                   1.25);
  EXPECT_DOUBLE_EQ(SpectralRisk(OneToFour(), step).holder.lipschitz, 4.0 * 2.0);
}

TEST(SpectralRiskTest, ValidatesSpectrum) {
  EXPECT_RISKCDF_ERROR(SpectrumSpec::Custom("half", [](double) { return 0.5; }),
                       kInvalidSpectrum);
  EXPECT_RISKCDF_ERROR(
      SpectrumSpec::Custom("falling", [](double u) { return 2.0 - 2.0 * u; }),
      kInvalidSpectrum);
  // Quadrature path (no antiderivative) for a linear spectrum 2u.
  const auto linear = SpectrumSpec::Custom("lin", [](double u) { return 2.0 * u; });
  const auto v = SpectralRisk(OneToFour(), linear).value;
  // Weights: integral of 2u over quarter blocks = (1, 3, 5, 7) / 16.
  EXPECT_NEAR(v, (1 * 1 + 2 * 3 + 3 * 5 + 4 * 7) / 16.0, 1e-12);
}

TEST(SpectralRiskTest, EquivalentDistortionAgrees) {
  const auto linear = SpectrumSpec::FromTable({{0, 0}, {1, 2}}, "lin");
  const auto direct = SpectralRisk(OneToFour(), linear).value;
  const auto via = DistortionRisk(OneToFour(), linear.ToDistortion()).value;
  EXPECT_NEAR(direct, via, 1e-12);
}

TEST(OceRiskTest, DocumentedExamples) {
  EXPECT_NEAR(OceRisk(OneToFour(), OceSpec::Mean(4.0)).value, 2.5, 1e-9);
  EXPECT_NEAR(OceRisk(OneToFour(), OceSpec::Cvar(0.5, 4.0)).value, 3.5, 1e-9);
  const auto expm1 =
      OceSpec::Custom("exp", [](double x) { return std::expm1(x); }, 2.0);
  EXPECT_NEAR(OceRisk(Cdf({1.5, 1.5, 1.5}), expm1).value, 1.5, 1e-9);
  EXPECT_RISKCDF_ERROR(OceRisk(OneToFour(), OceSpec::Mean(3.0)), kSupportViolation);
}

TEST(OceRiskTest, EntropicMatchesClosedForm) {
  // Entropic OCE equals (1/gamma) log E[exp(gamma U)].
  const double gamma = 0.7;
  const auto spec = OceSpec::Entropic(gamma, 4.0);
  double mgf = 0.0;
  for (double x : {1.0, 2.0, 3.0, 4.0}) mgf += std::exp(gamma * x) / 4.0;
  EXPECT_NEAR(OceRisk(OneToFour(), spec).value, std::log(mgf) / gamma, 1e-9);
}

TEST(InvertedOceRiskTest, DocumentedExamples) {
  EXPECT_NEAR(InvertedOceRisk(OneToFour(), OceSpec::Mean(4.0)).value, 2.5, 1e-9);
  const auto expm1 =
      OceSpec::Custom("exp", [](double x) { return std::expm1(x); }, 2.0);
  EXPECT_NEAR(InvertedOceRisk(Cdf({1.5, 1.5, 1.5}), expm1).value, 1.5, 1e-9);
  EXPECT_NEAR(InvertedOceRisk(OneToFour(), OceSpec::Cvar(0.5, 4.0)).value, 1.5, 1e-9);
}

TEST(InvertedOceRiskTest, MatchesBruteForceGrid) {
  const auto spec = OceSpec::Entropic(0.5, 4.0);
  double best = -1e300;
  for (int k = 0; k <= 400000; ++k) {
    const double lambda = 4.0 * k / 400000.0;
    double e = 0.0;
    for (double x : {1.0, 2.0, 3.0, 4.0}) e += spec(lambda - x) / 4.0;
    best = std::max(best, lambda - e);
  }
  EXPECT_NEAR(InvertedOceRisk(OneToFour(), spec).value, best, 1e-9);
}

TEST(MeanVarianceTest, DocumentedExamples) {
  EXPECT_DOUBLE_EQ(MeanVariance(Cdf({1, 2, 3}), 0.0).value, 2.0);
  EXPECT_DOUBLE_EQ(MeanVariance(Cdf({1, 2, 3}), 0.5).value, 7.0 / 3.0);
  EXPECT_DOUBLE_EQ(MeanVariance(Cdf({0.75, 0.75, 0.75}), 3.0).value, 0.75);
  EXPECT_DOUBLE_EQ(MeanVariance(Cdf({1, 2, 3}), 0.5, 1.0 * 3).holder.lipschitz,
                   3.0 + 3.0 * 0.5 * 9.0);
}

TEST(OceLipschitzTest, DocumentedExamples) {
  EXPECT_DOUBLE_EQ(OceLipschitzConstant(OceSpec::Mean(1.0), 1001), 1.0);
  EXPECT_DOUBLE_EQ(OceLipschitzConstant(OceSpec::Cvar(0.5, 1.0), 1001), 2.0);
  EXPECT_DOUBLE_EQ(OceLipschitzConstant(OceSpec::Mean(0.0), 1001), 0.0);
  EXPECT_DOUBLE_EQ(
      OceLipschitzConstant(OceSpec::Cvar(0.5, 1.0), 1001, OceDirection::kInverted),
      2.0);
}

TEST(HolderRiskErrorTest, DocumentedExamples) {
  EXPECT_DOUBLE_EQ(HolderRiskError(2.0, 1.0, 0.1), 0.2);
  EXPECT_DOUBLE_EQ(HolderRiskError(1.0, 0.5, 0.04), 0.2);
  EXPECT_EQ(HolderRiskError(3.0, 0.5, 0.0), 0.0);
}

TEST(DistortionWeightsTest, NonnegativeAndSumToOne) {
  for (std::size_t n : {1u, 4u, 7u, 100u, 999u}) {
    for (const auto& g : {DistortionSpec::Identity(), DistortionSpec::Cvar(0.05),
                          DistortionSpec::Cvar(0.3)}) {
      const auto w = DistortionWeights(n, g);
      for (double x : w) EXPECT_GE(x, 0.0);
      EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    }
  }
  EXPECT_EQ(DistortionWeights(4, DistortionSpec::Cvar(0.5)),
            (std::vector<double>{0, 0, 0.5, 0.5}));
}

// Randomized properties: oracles, monotonicity, law invariance, translation.
TEST(RiskPropertyTest, OraclesAndStructuralProperties) {
  CounterRng rng(DeriveSeed(7, "risk_property"));
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 20 * (1 + rng.UniformInt(10));
    std::vector<double> x(n);
    for (double& v : x) v = rng.Uniform(0.0, 10.0);
    const auto cdf = Cdf(x);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    EXPECT_NEAR(DistortionRisk(cdf, DistortionSpec::Identity()).value, mean, 1e-12);
    EXPECT_NEAR(DistortionRisk(cdf, DistortionSpec::Identity()).value,
                Moment(cdf, 1), 1e-12);

    double previous = 1e300;
    for (double alpha : {0.05, 0.1, 0.25, 0.5, 1.0}) {
      const double c = Cvar(cdf, alpha).value;
      EXPECT_LE(c, previous + 1e-12);
      EXPECT_GE(c, mean - 1e-12);
      previous = c;
      const auto k = static_cast<std::size_t>(std::llround(alpha * n));
      EXPECT_NEAR(c, TopMean(x, k), 1e-12);
      EXPECT_NEAR(SpectralRisk(cdf, SpectrumSpec::Cvar(alpha)).value, c, 1e-12);
    }
    EXPECT_NEAR(Cvar(cdf, 1.0).value, mean, 1e-12);

    std::vector<double> shuffled = x;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + n / 3, shuffled.end());
    EXPECT_EQ(Cvar(Cdf(shuffled), 0.1).value, Cvar(cdf, 0.1).value);
    EXPECT_EQ(MeanVariance(Cdf(shuffled), 0.5, 10.0).value,
              MeanVariance(cdf, 0.5, 10.0).value);

    const double shift = rng.Uniform(0.0, 3.0);
    std::vector<double> moved = x;
    for (double& v : moved) v += shift;
    EXPECT_NEAR(DistortionRisk(Cdf(moved), DistortionSpec::Cvar(0.25)).value,
                Cvar(cdf, 0.25).value + shift, 1e-11);
  }
}

TEST(RiskPropertyTest, OceCvarMatchesCvarWithinSearchTolerance) {
  CounterRng rng(DeriveSeed(8, "oce_property"));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(40);
    for (double& v : x) v = rng.Uniform(0.0, 5.0);
    const auto cdf = Cdf(x);
    for (double alpha : {0.05, 0.25, 0.5, 1.0}) {
      EXPECT_NEAR(OceRisk(cdf, OceSpec::Cvar(alpha, 5.0)).value,
                  Cvar(cdf, alpha).value, 1e-6);
    }
  }
}

}  // namespace
}  // namespace riskcdf
