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

#include "riskcdf/cdf.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "riskcdf/rng.hpp"
#include "test_util.hpp"

namespace riskcdf {
namespace {

EmpiricalCdf Cdf(std::vector<double> v) { return EmpiricalCdf::FromLosses(v); }

// Brute-force KS: evaluate both CDFs on a dense set of points around every
// sample value.
double BruteSupNorm(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  std::vector<double> probes;
  for (auto span : {a.values(), b.values()}) {
    for (double v : span) {
      probes.push_back(v);
      probes.push_back(std::nextafter(v, -1e300));
      probes.push_back(std::nextafter(v, 1e300));
    }
  }
  double best = 0.0;
  for (double r : probes) best = std::max(best, std::abs(a(r) - b(r)));
  return best;
}

// Riemann sum of |F_a - F_b| on a fine grid over [0, D].
double BruteW1(const EmpiricalCdf& a, const EmpiricalCdf& b, double d) {
  const int steps = 200000;
  double sum = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double r = d * (k + 0.5) / steps;
    sum += std::abs(a(r) - b(r));
  }
  return sum * d / steps;
}

TEST(EmpiricalCdfTest, EvaluatesStepFunction) {
  const auto cdf = Cdf({3, 1, 2});
  EXPECT_DOUBLE_EQ(cdf(1.5), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cdf(0.0), 0.0);
  EXPECT_DOUBLE_EQ(cdf(3.0), 1.0);
  EXPECT_DOUBLE_EQ(cdf(1.0), 1.0 / 3.0);  // right-continuous
  EXPECT_DOUBLE_EQ(cdf.LeftLimit(1.0), 0.0);
  EXPECT_DOUBLE_EQ(cdf(100.0), 1.0);
}

TEST(EmpiricalCdfTest, DuplicateStepHasMultiplicityHeight) {
  const auto cdf = Cdf({1, 1, 1, 2});
  EXPECT_DOUBLE_EQ(cdf(1.0) - cdf.LeftLimit(1.0), 0.75);
  const auto bp = cdf.Breakpoints();
  ASSERT_EQ(bp.size(), 2u);
  EXPECT_EQ(bp[0], std::make_pair(1.0, 0.75));
  EXPECT_EQ(bp[1], std::make_pair(2.0, 1.0));
}

TEST(EmpiricalCdfTest, RejectsInvalidSamples) {
  EXPECT_RISKCDF_ERROR(Cdf({}), kEmptySample);
  EXPECT_RISKCDF_ERROR(Cdf({1.0, -0.5}), kInvalidLoss);
  EXPECT_RISKCDF_ERROR(Cdf({std::numeric_limits<double>::quiet_NaN()}),
                       kInvalidLoss);
  EXPECT_RISKCDF_ERROR(Cdf({std::numeric_limits<double>::infinity()}),
                       kInvalidLoss);
  const std::vector<double> signed_values = {-1.0, 2.0};
  EXPECT_DOUBLE_EQ(EmpiricalCdf::FromSignedValues(signed_values)(0.0), 0.5);
}

TEST(EmpiricalCdfTest, QuantileIsGeneralizedInverse) {
  const auto cdf = Cdf({4, 1, 3, 2});
  EXPECT_EQ(cdf.Quantile(0.25), 1.0);
  EXPECT_EQ(cdf.Quantile(0.26), 2.0);
  EXPECT_EQ(cdf.Quantile(1.0), 4.0);
}

TEST(EmpiricalCdfTest, PermutationInvariant) {
  EXPECT_EQ(Cdf({3, 1, 2, 2}), Cdf({2, 2, 1, 3}));
}

TEST(SupNormTest, DocumentedExamples) {
  EXPECT_EQ(SupNormDistance(Cdf({1, 2}), Cdf({1, 2})), 0.0);
  EXPECT_DOUBLE_EQ(SupNormDistance(Cdf({0, 1}), Cdf({0, 2})), 0.5);
  EXPECT_DOUBLE_EQ(SupNormDistance(Cdf({0}), Cdf({1})), 1.0);
}

TEST(SupNormTest, MergesBreakpointsOfBothSamples) {
  EXPECT_DOUBLE_EQ(SupNormDistance(Cdf({0, 0, 0, 3}), Cdf({1, 2, 3, 3})), 0.75);
}

TEST(WassersteinTest, DocumentedExamples) {
  EXPECT_EQ(Wasserstein1(Cdf({1, 2}), Cdf({1, 2}), 2.0), 0.0);
  EXPECT_DOUBLE_EQ(Wasserstein1(Cdf({0}), Cdf({1}), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(Wasserstein1(Cdf({0, 1}), Cdf({0, 2}), 2.0), 0.5);
  EXPECT_RISKCDF_ERROR(Wasserstein1(Cdf({0, 3}), Cdf({1}), 2.0),
                       kSupportViolation);
}

TEST(MomentTest, DocumentedExamples) {
  EXPECT_DOUBLE_EQ(Moment(Cdf({1, 2, 3}), 1), 2.0);
  EXPECT_DOUBLE_EQ(Moment(Cdf({1, 2, 3}), 2), 14.0 / 3.0);
  EXPECT_DOUBLE_EQ(Moment(Cdf({1.5, 1.5, 1.5}), 3), 1.5 * 1.5 * 1.5);
  EXPECT_RISKCDF_ERROR(Moment(Cdf({1}), 0), kInvalidOrder);
}

TEST(CdfCsvTest, WritesBreakpoints) {
  std::ostringstream out;
  WriteCdfCsv(Cdf({1, 2, 3}), out);
  EXPECT_EQ(out.str(),
            "loss,cdf\n1,0.3333333333333333\n2,0.6666666666666666\n3,1\n");
}

TEST(CdfCsvTest, ReadsSingleColumnWithOptionalHeader) {
  const auto dir = testing::ScratchDir();
  const auto with = testing::WriteFile(dir / "a.csv", "loss\n1\n2.5\n");
  const auto without = testing::WriteFile(dir / "b.csv", "1\n\n2.5\n");
  EXPECT_EQ(ReadLossVectorCsv(with, true), (std::vector<double>{1, 2.5}));
  EXPECT_EQ(ReadLossVectorCsv(without, false), (std::vector<double>{1, 2.5}));
  const auto bad = testing::WriteFile(dir / "c.csv", "1\nx\n");
  EXPECT_RISKCDF_ERROR(ReadLossVectorCsv(bad, false), kFormatError);
}

// Randomized properties against the brute-force oracles.
TEST(CdfPropertyTest, DistancesMatchOraclesAndSatisfyInequalities) {
  CounterRng rng(DeriveSeed(42, "cdf_property"));
  const double d = 5.0;
  for (int trial = 0; trial < 60; ++trial) {
    auto draw = [&] {
      std::vector<double> v(1 + rng.UniformInt(12));
      // Coarse values create ties on purpose.
      for (double& x : v) x = 0.5 * static_cast<double>(rng.UniformInt(11));
      return Cdf(v);
    };
    const auto a = draw();
    const auto b = draw();
    const auto c = draw();
    const double ab = SupNormDistance(a, b);
    EXPECT_DOUBLE_EQ(ab, BruteSupNorm(a, b));
    EXPECT_EQ(ab, SupNormDistance(b, a));
    EXPECT_LE(SupNormDistance(a, c), ab + SupNormDistance(b, c) + 1e-15);
    const double w = Wasserstein1(a, b, d);
    EXPECT_NEAR(w, BruteW1(a, b, d), 1e-3);
    EXPECT_LE(w, d * ab + 1e-12);
    const auto report = CompareCdfs(a, b, d);
    EXPECT_EQ(report.sup_norm, ab);
    EXPECT_EQ(report.wasserstein1, w);
    for (double r = -0.25; r <= 5.5; r += 0.25) {
      const double f = a(r) * static_cast<double>(a.size());
      EXPECT_DOUBLE_EQ(f, std::round(f));
      EXPECT_LE(a(r), a(r + 0.25));
    }
  }
}

}  // namespace
}  // namespace riskcdf
