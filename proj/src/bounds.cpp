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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riskcdf/cdf.hpp"
#include "riskcdf/error.hpp"
#include "riskcdf/parallel.hpp"
#include "riskcdf/rng.hpp"

namespace riskcdf {
namespace {

void CheckN(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kConfigError, "sample size must be >= 1");
}

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    std::ostringstream msg;
    msg << "delta must lie in (0, 1], got " << delta;
    throw Error(ErrorCode::kInvalidDelta, msg.str());
  }
}

double RademacherFromLogGrowth(std::size_t n, double log_growth) {
  CheckN(n);
  if (!(log_growth >= 0.0)) {
    throw Error(ErrorCode::kInvalidGrowth, "growth count must be >= 1");
  }
  return 2.0 * std::sqrt(log_growth / static_cast<double>(n));
}

std::vector<double> HypothesisLosses(const ExampleLoss& loss,
                                     const Dataset& data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& z : data.examples) out.push_back(loss(z));
  return out;
}

}  // namespace

std::string_view BoundMethodName(BoundMethod method) {
  switch (method) {
    case BoundMethod::kFiniteClass: return "finite_class";
    case BoundMethod::kPermutation: return "permutation";
    case BoundMethod::kGrowth: return "growth";
    case BoundMethod::kVcSauer: return "vc_sauer";
    case BoundMethod::kUserSupplied: return "user_supplied";
  }
  return "unknown";
}

BoundMethod ParseBoundMethod(std::string_view name) {
  for (auto m : {BoundMethod::kFiniteClass, BoundMethod::kPermutation,
                 BoundMethod::kGrowth, BoundMethod::kVcSauer,
                 BoundMethod::kUserSupplied}) {
    if (BoundMethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kConfigError,
              "unknown bound method '" + std::string(name) + "'");
}

double McDiarmidTerm(std::size_t n, double delta) {
  CheckN(n);
  CheckDelta(delta);
  return std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
}

double RademacherFiniteClass(std::size_t n, std::size_t class_size) {
  return RademacherPermutation(n, static_cast<double>(class_size));
}

double RademacherPermutation(std::size_t n, double n_pi) {
  CheckN(n);
  if (!(n_pi >= 1.0)) {
    throw Error(ErrorCode::kConfigError, "class size / N_pi must be >= 1");
  }
  return std::sqrt(std::log(4.0 * n_pi) / (2.0 * static_cast<double>(n)));
}

double RademacherGrowth(std::size_t n, double growth) {
  if (!(growth >= 1.0)) {
    std::ostringstream msg;
    msg << "growth count must be >= 1, got " << growth;
    throw Error(ErrorCode::kInvalidGrowth, msg.str());
  }
  return RademacherFromLogGrowth(n, std::log(growth));
}

double FiniteClassGrowth(std::size_t n, std::size_t class_size) {
  return static_cast<double>(n + 1) * static_cast<double>(class_size);
}

double LogVcGrowth(std::size_t n, double vc_dim) {
  if (!(vc_dim >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "VC dimension must be >= 0");
  }
  return vc_dim * std::log(static_cast<double>(n + 1));
}

BoundCertificate CdfUniformBound(double rademacher_bound, std::size_t n,
                                 double delta, BoundMethod method,
                                 std::map<std::string, double> inputs) {
  if (!(rademacher_bound >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "Rademacher bound must be >= 0");
  }
  BoundCertificate cert;
  cert.method = method;
  cert.n = n;
  cert.delta = delta;
  cert.inputs = std::move(inputs);
  cert.rademacher_bound = rademacher_bound;
  cert.epsilon = 2.0 * rademacher_bound + McDiarmidTerm(n, delta);
  return cert;
}

BoundCertificate FiniteClassCertificate(std::size_t n, std::size_t class_size,
                                        double delta) {
  return CdfUniformBound(RademacherFiniteClass(n, class_size), n, delta,
                         BoundMethod::kFiniteClass,
                         {{"class_size", static_cast<double>(class_size)}});
}

BoundCertificate PermutationCertificate(std::size_t n, double n_pi,
                                        double delta) {
  return CdfUniformBound(RademacherPermutation(n, n_pi), n, delta,
                         BoundMethod::kPermutation, {{"n_pi", n_pi}});
}

BoundCertificate GrowthCertificate(std::size_t n, double growth, double delta) {
  return CdfUniformBound(RademacherGrowth(n, growth), n, delta,
                         BoundMethod::kGrowth, {{"growth", growth}});
}

BoundCertificate VcSauerCertificate(std::size_t n, double vc_dim,
                                    double delta) {
  return CdfUniformBound(RademacherFromLogGrowth(n, LogVcGrowth(n, vc_dim)), n,
                         delta, BoundMethod::kVcSauer, {{"vc_dim", vc_dim}});
}

BoundCertificate UserSuppliedCertificate(std::size_t n, double delta,
                                         double epsilon) {
  CheckN(n);
  CheckDelta(delta);
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "epsilon must be >= 0");
  }
  BoundCertificate cert;
  cert.method = BoundMethod::kUserSupplied;
  cert.n = n;
  cert.delta = delta;
  cert.epsilon = epsilon;
  return cert;
}

double RiskErrorBound(const BoundCertificate& cert, double lipschitz) {
  return lipschitz * cert.epsilon;
}

double WassersteinRiskErrorBound(const BoundCertificate& cert, double lipschitz,
                                 double support_bound, double exponent) {
  if (cert.epsilon == 0.0) return 0.0;
  return lipschitz * std::pow(support_bound, exponent) *
         std::pow(cert.epsilon, exponent);
}

double ExcessRiskBound(double risk_error) {
  if (!(risk_error >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "risk error must be >= 0");
  }
  return 2.0 * risk_error;
}

nlohmann::json CertificateToJson(const BoundCertificate& cert) {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [k, v] : cert.inputs) inputs[k] = v;
  return {{"method", std::string(BoundMethodName(cert.method))},
          {"n", cert.n},
          {"delta", cert.delta},
          {"inputs", inputs},
          {"rademacher_bound", cert.rademacher_bound},
          {"epsilon", cert.epsilon},
          {"log", "natural"}};
}

double MonteCarloEnResult::ViolationFraction(double epsilon) const {
  if (e_n.empty()) return 0.0;
  const auto above = std::count_if(e_n.begin(), e_n.end(),
                                   [epsilon](double e) { return e > epsilon; });
  return static_cast<double>(above) / static_cast<double>(e_n.size());
}

MonteCarloEnResult MonteCarloEn(std::span<const ExampleLoss> hypotheses,
                                const DataGenerator& generator,
                                const MonteCarloEnOptions& options) {
  CheckN(options.n);
  CheckDelta(options.delta);
  if (hypotheses.empty() || options.reps == 0 || options.reference_size == 0) {
    throw Error(ErrorCode::kConfigError,
                "need at least one hypothesis, one rep and a reference sample");
  }
  MonteCarloEnResult result;
  result.n = options.n;
  result.reference_size = options.reference_size;
  result.delta = options.delta;
  if (options.reference_size < 10 * options.n) {
    result.warnings.push_back(
        "WeakReference: reference sample is smaller than 10 n; e_n is "
        "inflated by the reference CDF's own error");
  }

  const Dataset reference = generator(
      options.reference_size, DeriveSeed(options.seed, "mc_reference"));
  std::vector<EmpiricalCdf> reference_cdfs;
  reference_cdfs.reserve(hypotheses.size());
  for (const auto& h : hypotheses) {
    reference_cdfs.push_back(
        EmpiricalCdf::FromSignedValues(HypothesisLosses(h, reference)));
  }

  const std::uint64_t rep_key = DeriveSeed(options.seed, "mc_reps");
  result.e_n.assign(options.reps, 0.0);
  ParallelFor(options.reps, options.threads, [&](std::size_t rep) {
    const Dataset sample = generator(options.n, DeriveSeed(rep_key, rep));
    double worst = 0.0;
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
      const auto cdf =
          EmpiricalCdf::FromSignedValues(HypothesisLosses(hypotheses[h], sample));
      worst = std::max(worst, SupNormDistance(cdf, reference_cdfs[h]));
    }
    result.e_n[rep] = worst;
  });

  const auto dist = EmpiricalCdf::FromSignedValues(result.e_n);
  result.upper_quantile = options.delta < 1.0 ? dist.Quantile(1.0 - options.delta)
                                              : dist.min();
  result.median = dist.Quantile(0.5);
  return result;
}

}  // namespace riskcdf
