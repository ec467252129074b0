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

// Uniform-convergence certificates for empirical loss CDFs.
//
// With probability at least 1 - delta, the worst CDF estimation error over a
// hypothesis class,
//
//   e_n = sup_f sup_r |F_hat(r; f) - F(r; f)|,
//
// is at most epsilon = 2 R + sqrt(log(1/delta) / (2n)), where R bounds the
// Rademacher complexity of the indicator-composed loss class. The helpers
// below give R for finite classes, by permutation complexity, or from a
// growth count. All logarithms are natural.

#ifndef RISKCDF_BOUNDS_HPP_
#define RISKCDF_BOUNDS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "riskcdf/data.hpp"
#include "riskcdf/models.hpp"

namespace riskcdf {

enum class BoundMethod {
  kFiniteClass,
  kPermutation,
  kGrowth,
  kVcSauer,
  kUserSupplied,
};

std::string_view BoundMethodName(BoundMethod method);
BoundMethod ParseBoundMethod(std::string_view name);

struct BoundCertificate {
  BoundMethod method = BoundMethod::kFiniteClass;
  std::size_t n = 0;
  double delta = 1.0;
  /// Method-specific inputs, e.g. {"class_size": 5} or {"n_pi": 3}.
  std::map<std::string, double> inputs;
  double rademacher_bound = 0.0;
  double epsilon = 0.0;
};

/// sqrt(ln(1/delta) / (2n)). Throws InvalidDelta unless 0 < delta <= 1.
double McDiarmidTerm(std::size_t n, double delta);

/// sqrt(ln(4 |F|) / (2n)).
double RademacherFiniteClass(std::size_t n, std::size_t class_size);

/// sqrt(ln(4 N_pi) / (2n)), N_pi the (expected) permutation complexity.
double RademacherPermutation(std::size_t n, double n_pi);

/// 2 sqrt(ln(growth) / n), growth the number of distinct indicator labelings.
/// Throws InvalidGrowth for growth < 1.
double RademacherGrowth(std::size_t n, double growth);

/// Growth count (n + 1) |F| of a finite class composed with thresholds.
double FiniteClassGrowth(std::size_t n, std::size_t class_size);

/// Sauer-lemma growth count (n + 1)^nu, returned as its natural logarithm
/// because it overflows quickly.
double LogVcGrowth(std::size_t n, double vc_dim);

/// Certificate epsilon = 2 R + McDiarmidTerm(n, delta).
BoundCertificate CdfUniformBound(double rademacher_bound, std::size_t n,
                                 double delta,
                                 BoundMethod method = BoundMethod::kFiniteClass,
                                 std::map<std::string, double> inputs = {});

BoundCertificate FiniteClassCertificate(std::size_t n, std::size_t class_size,
                                        double delta);
BoundCertificate PermutationCertificate(std::size_t n, double n_pi,
                                        double delta);
BoundCertificate GrowthCertificate(std::size_t n, double growth, double delta);
BoundCertificate VcSauerCertificate(std::size_t n, double vc_dim, double delta);
/// Wraps an externally obtained epsilon.
BoundCertificate UserSuppliedCertificate(std::size_t n, double delta,
                                         double epsilon);

/// L * epsilon: simultaneous error bound for every sup-norm Lipschitz risk
/// with constant at most L, over every hypothesis in the class.
double RiskErrorBound(const BoundCertificate& cert, double lipschitz);

/// L * D^p * epsilon^p for risks Hoelder in the Wasserstein-1 distance on
/// losses supported in [0, D].
double WassersteinRiskErrorBound(const BoundCertificate& cert, double lipschitz,
                                 double support_bound, double exponent);

/// Excess risk of the empirical minimizer is at most twice the uniform
/// estimation error.
double ExcessRiskBound(double risk_error);

nlohmann::json CertificateToJson(const BoundCertificate& cert);

struct MonteCarloEnResult {
  std::vector<double> e_n;  // one value per rep
  std::size_t n = 0;
  std::size_t reference_size = 0;
  double delta = 1.0;
  double upper_quantile = 0.0;  // empirical (1 - delta)-quantile of e_n
  double median = 0.0;
  std::vector<std::string> warnings;

  /// Fraction of reps with e_n strictly above `epsilon`.
  double ViolationFraction(double epsilon) const;
};

struct MonteCarloEnOptions {
  std::size_t reference_size = 20000;
  std::size_t n = 200;
  std::size_t reps = 1000;
  double delta = 0.1;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Monte Carlo distribution of e_n for a finite class of fixed hypotheses.
///
/// The unknown true CDF of each hypothesis is replaced by an empirical CDF of
/// `reference_size` points drawn once. Rep r draws n fresh points from a seed
/// derived from (seed, r), so results do not depend on the thread count. A
/// reference smaller than 10 n adds a WeakReference warning.
MonteCarloEnResult MonteCarloEn(std::span<const ExampleLoss> hypotheses,
                                const DataGenerator& generator,
                                const MonteCarloEnOptions& options);

}  // namespace riskcdf

#endif  // RISKCDF_BOUNDS_HPP_
