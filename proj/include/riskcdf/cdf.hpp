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

#ifndef RISKCDF_CDF_HPP_
#define RISKCDF_CDF_HPP_

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace riskcdf {

/// Empirical CDF of a loss sample, F(r) = #{i : x_i <= r} / n.
///
/// The step function is right-continuous: F(r) = 0 below the smallest value
/// and F(r) = 1 at and above the largest. A value repeated k times carries a
/// step of height k / n. Instances are immutable.
class EmpiricalCdf {
 public:
  /// Builds the CDF of a nonnegative loss sample.
  /// Throws EmptySample for an empty input and InvalidLoss for NaN,
  /// infinite or negative entries.
  static EmpiricalCdf FromLosses(std::span<const double> losses);

  /// Same as FromLosses but accepts negative values. Use only for distance
  /// computations; the risk functionals assume nonnegative losses.
  static EmpiricalCdf FromSignedValues(std::span<const double> values);

  /// F(r).
  double Eval(double r) const;
  double operator()(double r) const { return Eval(r); }

  /// F(r-) = #{i : x_i < r} / n.
  double LeftLimit(double r) const;

  /// Smallest sample value x with F(x) >= u, for u in (0, 1].
  double Quantile(double u) const;

  /// Ascending-sorted sample.
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  /// Distinct sample values paired with F at each of them.
  std::vector<std::pair<double, double>> Breakpoints() const;

  friend bool operator==(const EmpiricalCdf&, const EmpiricalCdf&) = default;

 private:
  explicit EmpiricalCdf(std::vector<double> sorted) : values_(std::move(sorted)) {}

  std::vector<double> values_;
};

struct CdfDistanceReport {
  double sup_norm = 0.0;
  double wasserstein1 = 0.0;
  double support_bound = 0.0;
};

/// Exact Kolmogorov-Smirnov statistic sup_r |F_a(r) - F_b(r)|. Both the value
/// and the left limit are checked at every breakpoint of either CDF.
double SupNormDistance(const EmpiricalCdf& a, const EmpiricalCdf& b);

/// Integral of |F_a - F_b| over [0, D]. Throws SupportViolation when a value
/// of either sample lies outside [0, D].
double Wasserstein1(const EmpiricalCdf& a, const EmpiricalCdf& b,
                    double support_bound);

CdfDistanceReport CompareCdfs(const EmpiricalCdf& a, const EmpiricalCdf& b,
                              double support_bound);

/// (1/n) * sum x_i^k. Throws InvalidOrder for k < 1.
double Moment(const EmpiricalCdf& cdf, int k);

/// Two-column CSV "loss,cdf" with one row per distinct sample value.
void WriteCdfCsv(const EmpiricalCdf& cdf, std::ostream& out);

/// Reads a single-column CSV of losses.
std::vector<double> ReadLossVectorCsv(const std::filesystem::path& path,
                                      bool has_header);

}  // namespace riskcdf

#endif  // RISKCDF_CDF_HPP_
