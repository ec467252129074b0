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

// Empirical distortion risk minimization.
//
// Sorting the n per-example losses ascending, the empirical distortion risk
// is sum_i g(1 - (i-1)/n) (l_(i) - l_(i-1)) with l_(0) = 0, and away from
// ties its gradient is sum_i w_i grad l_(i) with
// w_i = g(1 - (i-1)/n) - g(1 - i/n). Training takes full-batch steps
//
//   theta <- theta - eta (gradient + w),  w ~ N(0, I / d).

#ifndef RISKCDF_OPTIM_HPP_
#define RISKCDF_OPTIM_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskcdf/error.hpp"
#include "riskcdf/models.hpp"
#include "riskcdf/risks.hpp"
#include "riskcdf/rng.hpp"

namespace riskcdf {

inline constexpr double kDivergenceThreshold = 1e12;

struct TrainConfig {
  /// Learning rate. When absent, beta must be set and eta = 1 / (beta sqrt(T)).
  std::optional<double> eta;
  std::optional<double> beta;
  std::size_t iterations = 1000;  // T
  std::uint64_t seed = 0;
  DistortionSpec distortion = DistortionSpec::Identity();
  /// Test hook: false drops the Gaussian perturbation.
  bool noise_enabled = true;
  /// Keep (theta_t, gradient_t) every this many iterations; 0 disables.
  std::size_t snapshot_every = 1;
  std::size_t threads = 1;

  /// Throws ConfigError for T = 0, a negative or non-finite eta, or neither
  /// eta nor a positive beta.
  double ResolvedEta() const;
};

struct TrainRecord {
  std::size_t t = 0;  // 1-based
  double risk = 0.0;
  double grad_norm = 0.0;
  double avg_sq_grad_norm = 0.0;  // mean of grad_norm^2 over records 1..t
};

struct ParameterSnapshot {
  std::size_t t = 0;
  std::vector<double> theta;
  std::vector<double> gradient;
};

struct TrainTrace {
  std::vector<TrainRecord> records;
  std::vector<ParameterSnapshot> snapshots;
  std::vector<double> initial_parameters;
  std::vector<double> final_parameters;
  double final_risk = 0.0;  // risk at the parameters after the last step
  double eta = 0.0;
  std::uint64_t seed = 0;
  bool noise_enabled = true;
  std::string distortion;
};

/// Thrown by Train when the risk exceeds kDivergenceThreshold or stops being
/// finite. Carries the records up to and including the failing iteration.
class DivergedError : public Error {
 public:
  DivergedError(const std::string& what, TrainTrace partial)
      : Error(ErrorCode::kDiverged, what), partial_(std::move(partial)) {}

  const TrainTrace& partial_trace() const { return partial_; }

 private:
  TrainTrace partial_;
};

/// Per-example losses at the model's current parameters.
std::vector<double> ExampleLosses(const LossModel& model,
                                  std::span<const Example> data);

/// Stable ascending order of `losses`; ties keep their original order.
std::vector<std::size_t> SortingPermutation(std::span<const double> losses);

/// Throws EmptySample for empty data.
double EmpiricalDistortionRisk(const LossModel& model,
                               std::span<const Example> data,
                               const DistortionSpec& g);

struct RiskGradient {
  double risk = 0.0;
  std::vector<double> gradient;
};

/// Risk and reweighted full gradient. Per-example work runs on `threads`
/// workers; the weighted sum is sequential in sorted order.
RiskGradient DistortionGradient(const LossModel& model,
                                std::span<const Example> data,
                                const DistortionSpec& g,
                                std::size_t threads = 1);

/// theta - eta (gradient + w) with w_j ~ N(0, 1/d). A null `noise` means
/// w = 0.
std::vector<double> NoisyGdStep(std::span<const double> theta,
                                std::span<const double> gradient, double eta,
                                CounterRng* noise);

/// Runs T iterations from the model's current parameters. Deterministic for
/// a fixed seed; the thread count only affects per-example evaluation.
TrainTrace Train(const LossModel& model, std::span<const Example> data,
                 const TrainConfig& config);

/// Max over consecutive snapshots of |grad_t - grad_s| / |theta_t - theta_s|.
/// Returns nullopt with fewer than two distinct snapshots.
std::optional<double> EstimateBeta(const TrainTrace& trace);

struct StationarityReport {
  double average_sq_grad_norm = 0.0;
  double bound = 0.0;
  bool holds = false;
  double initial_risk = 0.0;
  /// Best observed risk, used in place of the unknown minimum.
  double best_risk = 0.0;
  bool best_risk_is_surrogate = true;
  double beta = 0.0;
  bool beta_estimated = false;
  double first_decile_mean = 0.0;  // mean grad_norm^2 over the first T/10
  double last_decile_mean = 0.0;
  /// The left side is a single-run average, not an expectation over noise.
  std::string note;
};

/// Compares (1/T) sum ||grad_t||^2 with
/// (2 beta / sqrt(T)) (rho_1 - rho_best + 1 / (2 beta)). Without `beta` it is
/// estimated from the trace; ConfigError if that is impossible.
StationarityReport Stationarity(const TrainTrace& trace,
                                std::optional<double> beta = std::nullopt);

nlohmann::json StationarityToJson(const StationarityReport& report);

struct GradCheckOptions {
  Architecture architecture = Architecture::kLogisticCrossEntropy;
  DistortionSpec distortion = DistortionSpec::Identity();
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double step = 1e-6;
  std::size_t num_examples = 40;
  std::size_t feature_dim = 3;
  std::vector<std::size_t> hidden = {5};
  /// Points whose sorted losses are closer than this are redrawn so the
  /// finite difference never crosses a tie.
  double min_loss_gap = 1e-5;
  std::size_t max_redraws = 1000;
};

struct GradCheckResult {
  /// max over trials of |fd - <grad, u>| / max(1, |fd|, |<grad, u>|).
  double max_relative_error = 0.0;
  std::size_t trials = 0;
  std::size_t redraws = 0;
};

/// Central-difference check of DistortionGradient along random unit
/// directions at random parameters on random data. Throws ConfigError if a
/// tie-free point cannot be found within max_redraws.
GradCheckResult DirectionalGradientCheck(const GradCheckOptions& options);

/// Columns t, risk, grad_norm, avg_sq_grad_norm.
void WriteTraceCsv(const TrainTrace& trace, std::ostream& out);

}  // namespace riskcdf

#endif  // RISKCDF_OPTIM_HPP_
