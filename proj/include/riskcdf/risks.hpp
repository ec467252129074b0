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

// Law-invariant risk functionals evaluated on an empirical loss CDF.
//
// Every functional here is a plug-in estimate rho(F_hat): it depends on the
// loss sample only through its empirical CDF, so permuting the sample never
// changes a result. Each evaluation also reports the Hoelder constants
// (L, p, metric) that turn a CDF estimation error into a risk estimation
// error |rho(F) - rho(F_hat)| <= L * d(F, F_hat)^p.

#ifndef RISKCDF_RISKS_HPP_
#define RISKCDF_RISKS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riskcdf/cdf.hpp"

namespace riskcdf {

/// How a Lipschitz/Hoelder constant was obtained.
enum class ConstantKind {
  kClosedForm,  // exact, from the functional's definition
  kSupplied,    // given by the caller
  kEstimated,   // max finite-difference slope on the validation grid
};

const char* ConstantKindName(ConstantKind kind);

struct HolderConstants {
  double lipschitz = 0.0;  // L
  double exponent = 1.0;   // p
  std::string metric = "sup_norm";
  ConstantKind kind = ConstantKind::kClosedForm;
};

struct RiskValue {
  double value = 0.0;
  std::string risk_name;
  HolderConstants holder;
};

/// Validation grid used for distortion, spectrum and disutility checks.
inline constexpr std::size_t kValidationGridSize = 10001;
inline constexpr double kDistortionTolerance = 1e-9;
inline constexpr double kSpectrumMassTolerance = 1e-6;

/// A distortion function g on [0, 1] with g(0) = 0, g(1) = 1, non-decreasing.
/// Construction validates g numerically and throws InvalidDistortion.
class DistortionSpec {
 public:
  using Function = std::function<double(double)>;

  /// g(t) = t; the expected value.
  static DistortionSpec Identity();
  /// g(t) = min(t / alpha, 1); the mean of the upper alpha-tail.
  /// Throws InvalidAlpha unless 0 < alpha <= 1.
  static DistortionSpec Cvar(double alpha);
  /// Linear interpolation through (t, g(t)) knots. Knots must be strictly
  /// increasing in t, start at t = 0 and end at t = 1.
  static DistortionSpec FromTable(std::vector<std::pair<double, double>> knots,
                                  std::string name);
  /// Loads a two-column "t,g" CSV table (header optional).
  static DistortionSpec FromCsv(const std::string& path);
  /// Arbitrary g. Without `lipschitz` the constant is estimated from the
  /// validation grid.
  static DistortionSpec Custom(std::string name, Function g,
                               std::optional<double> lipschitz = std::nullopt);

  double operator()(double t) const { return g_(t); }
  const std::string& name() const { return name_; }
  /// Lipschitz constant of g on [0, 1].
  double lipschitz() const { return lipschitz_; }
  ConstantKind lipschitz_kind() const { return lipschitz_kind_; }

 private:
  DistortionSpec(std::string name, Function g, double lipschitz,
                 ConstantKind kind);

  std::string name_;
  Function g_;
  double lipschitz_;
  ConstantKind lipschitz_kind_;
};

/// A spectrum h on [0, 1]: nonnegative, non-decreasing, integrating to 1.
/// The spectral risk is sum_i w_i * x_(i) with w_i the h-mass of the i-th
/// quantile block [(i-1)/n, i/n], so h(u) weights the u-quantile of the loss.
class SpectrumSpec {
 public:
  using Function = std::function<double(double)>;

  /// h = 1.
  static SpectrumSpec Uniform();
  /// h(u) = 1{u >= 1 - alpha} / alpha.
  static SpectrumSpec Cvar(double alpha);
  /// Piecewise-linear h through (u, h(u)) knots covering [0, 1].
  static SpectrumSpec FromTable(std::vector<std::pair<double, double>> knots,
                                std::string name);
  static SpectrumSpec FromCsv(const std::string& path);
  /// Arbitrary h. `cumulative`, when given, must be an antiderivative of h
  /// and makes block masses exact; otherwise Gauss-Legendre quadrature is
  /// used per block.
  static SpectrumSpec Custom(std::string name, Function h,
                             Function cumulative = nullptr);

  double Density(double u) const { return h_(u); }
  /// Integral of h over [lo, hi].
  double Mass(double lo, double hi) const;
  const std::string& name() const { return name_; }
  /// sup h, which is h(1) for a non-decreasing spectrum.
  double sup() const { return h_(1.0); }

  /// The equivalent distortion g(t) = integral of h over [1 - t, 1].
  DistortionSpec ToDistortion() const;

 private:
  SpectrumSpec(std::string name, Function h, Function cumulative);

  std::string name_;
  Function h_;
  Function cumulative_;
};

/// Disutility phi for optimized certainty equivalents: phi(0) = 0 and
/// non-decreasing (checked on a grid over [-D, D]; ConfigError otherwise).
class OceSpec {
 public:
  using Function = std::function<double(double)>;

  /// phi(x) = x.
  static OceSpec Mean(double support_bound);
  /// phi(x) = max(x, 0) / alpha.
  static OceSpec Cvar(double alpha, double support_bound);
  /// phi(x) = (exp(gamma x) - 1) / gamma.
  static OceSpec Entropic(double gamma, double support_bound);
  static OceSpec Custom(std::string name, Function phi, double support_bound);

  OceSpec& set_tolerance(double tolerance);

  double operator()(double x) const { return phi_(x); }
  const std::string& name() const { return name_; }
  double support_bound() const { return support_bound_; }
  double tolerance() const { return tolerance_; }

 private:
  OceSpec(std::string name, Function phi, double support_bound);

  std::string name_;
  Function phi_;
  double support_bound_;
  double tolerance_ = 1e-7;
};

/// w_i = g(1 - (i-1)/n) - g(1 - i/n), i = 1..n: the weight of the i-th
/// smallest loss. Nonnegative, summing to g(1) - g(0) = 1.
std::vector<double> DistortionWeights(std::size_t n, const DistortionSpec& g);

/// Telescoping form sum_i g(1 - (i-1)/n) * (x_(i) - x_(i-1)), x_(0) = 0,
/// over an ascending-sorted nonnegative sample. This is the integral of
/// g(1 - F(r)) over [0, inf) for the step CDF, without quadrature error.
double DistortionRiskSorted(std::span<const double> sorted_losses,
                            const DistortionSpec& g);

// In the functions below `support_bound` is the D of the loss support
// [0, D] used for the reported constants; it defaults to the sample maximum.

RiskValue DistortionRisk(const EmpiricalCdf& cdf, const DistortionSpec& g,
                         std::optional<double> support_bound = std::nullopt);

/// Mean of the upper alpha-tail. Throws InvalidAlpha unless 0 < alpha <= 1.
RiskValue Cvar(const EmpiricalCdf& cdf, double alpha,
               std::optional<double> support_bound = std::nullopt);

RiskValue SpectralRisk(const EmpiricalCdf& cdf, const SpectrumSpec& spectrum,
                       std::optional<double> support_bound = std::nullopt);

/// min over lambda in [0, D] of lambda + mean(phi(x_i - lambda)): a
/// 1000-point grid followed by golden-section refinement. Throws
/// SupportViolation if a loss lies outside [0, D].
RiskValue OceRisk(const EmpiricalCdf& cdf, const OceSpec& spec);

/// max over lambda in [0, D] of lambda - mean(phi(lambda - x_i)).
RiskValue InvertedOceRisk(const EmpiricalCdf& cdf, const OceSpec& spec);

/// mean + c * variance. Throws ConfigError for c < 0.
RiskValue MeanVariance(const EmpiricalCdf& cdf, double c,
                       std::optional<double> support_bound = std::nullopt);

enum class OceDirection { kRiskAverse, kInverted };

/// Sup-norm Lipschitz constant of an (inverted) OCE risk on [0, D]:
/// max over x in [0, D] of phi(D - x) - phi(-x) (risk-averse) or
/// phi(x) - phi(x - D) (inverted), on a uniform grid of `grid_size` points.
double OceLipschitzConstant(const OceSpec& spec, std::size_t grid_size,
                            OceDirection direction = OceDirection::kRiskAverse);

/// L * epsilon^p.
double HolderRiskError(double lipschitz, double exponent, double epsilon);

}  // namespace riskcdf

#endif  // RISKCDF_RISKS_HPP_
