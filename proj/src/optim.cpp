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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "riskcdf/csv.hpp"
#include "riskcdf/parallel.hpp"

namespace riskcdf {
namespace {

void CheckData(std::span<const Example> data) {
  if (data.empty()) throw Error(ErrorCode::kEmptySample, "no training examples");
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double DistanceBetween(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double MeanSquaredNorm(const std::vector<TrainRecord>& records,
                       std::size_t begin, std::size_t end) {
  if (begin >= end) return 0.0;
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    s += records[i].grad_norm * records[i].grad_norm;
  }
  return s / static_cast<double>(end - begin);
}

}  // namespace

double TrainConfig::ResolvedEta() const {
  if (iterations == 0) {
    throw Error(ErrorCode::kConfigError, "iteration count must be >= 1");
  }
  if (eta) {
    if (!(std::isfinite(*eta) && *eta >= 0.0)) {
      throw Error(ErrorCode::kConfigError, "learning rate must be >= 0");
    }
    return *eta;
  }
  if (beta && std::isfinite(*beta) && *beta > 0.0) {
    return 1.0 / (*beta * std::sqrt(static_cast<double>(iterations)));
  }
  throw Error(ErrorCode::kConfigError,
              "set a learning rate or a positive smoothness estimate beta");
}

std::vector<double> ExampleLosses(const LossModel& model,
                                  std::span<const Example> data) {
  std::vector<double> losses;
  losses.reserve(data.size());
  for (const auto& z : data) losses.push_back(model.Loss(z));
  return losses;
}

std::vector<std::size_t> SortingPermutation(std::span<const double> losses) {
  std::vector<std::size_t> order(losses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return losses[a] < losses[b];
  });
  return order;
}

double EmpiricalDistortionRisk(const LossModel& model,
                               std::span<const Example> data,
                               const DistortionSpec& g) {
  CheckData(data);
  const auto losses = ExampleLosses(model, data);
  std::vector<double> sorted(losses.size());
  const auto order = SortingPermutation(losses);
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = losses[order[i]];
  return DistortionRiskSorted(sorted, g);
}

RiskGradient DistortionGradient(const LossModel& model,
                                std::span<const Example> data,
                                const DistortionSpec& g, std::size_t threads) {
  CheckData(data);
  const std::size_t n = data.size();
  const std::size_t d = model.num_parameters();
  std::vector<double> losses(n);
  std::vector<double> grads(n * d);
  ParallelFor(n, threads, [&](std::size_t i) {
    losses[i] = model.LossAndGradient(
        data[i], std::span<double>(grads.data() + i * d, d));
  });

  const auto order = SortingPermutation(losses);
  const auto weights = DistortionWeights(n, g);
  RiskGradient out;
  out.gradient.assign(d, 0.0);
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = order[i];
    sorted[i] = losses[k];
    if (weights[i] == 0.0) continue;
    const double* gk = grads.data() + k * d;
    for (std::size_t j = 0; j < d; ++j) out.gradient[j] += weights[i] * gk[j];
  }
  out.risk = DistortionRiskSorted(sorted, g);
  return out;
}

std::vector<double> NoisyGdStep(std::span<const double> theta,
                                std::span<const double> gradient, double eta,
                                CounterRng* noise) {
  if (theta.size() != gradient.size()) {
    throw Error(ErrorCode::kShapeError,
                "parameter and gradient dimensions differ");
  }
  const double scale =
      theta.empty() ? 0.0 : 1.0 / std::sqrt(static_cast<double>(theta.size()));
  std::vector<double> next(theta.begin(), theta.end());
  for (std::size_t j = 0; j < next.size(); ++j) {
    const double w = noise != nullptr ? scale * noise->Gaussian() : 0.0;
    next[j] -= eta * (gradient[j] + w);
  }
  return next;
}

TrainTrace Train(const LossModel& model, std::span<const Example> data,
                 const TrainConfig& config) {
  CheckData(data);
  TrainTrace trace;
  trace.eta = config.ResolvedEta();
  trace.seed = config.seed;
  trace.noise_enabled = config.noise_enabled;
  trace.distortion = config.distortion.name();
  trace.initial_parameters.assign(model.parameters().begin(),
                                  model.parameters().end());
  trace.records.reserve(config.iterations);

  CounterRng noise(DeriveSeed(config.seed, "noise"));
  CounterRng* noise_ptr = config.noise_enabled ? &noise : nullptr;
  LossModel current = model;
  double sum_sq = 0.0;

  auto check = [&](double risk, std::size_t t) {
    if (!std::isfinite(risk) || risk > kDivergenceThreshold) {
      std::ostringstream msg;
      msg << "risk " << risk << " at iteration " << t
          << "; lower the learning rate";
      trace.final_parameters.assign(current.parameters().begin(),
                                    current.parameters().end());
      trace.final_risk = risk;
      throw DivergedError(msg.str(), trace);
    }
  };

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const RiskGradient rg =
        DistortionGradient(current, data, config.distortion, config.threads);
    const double norm = Norm(rg.gradient);
    sum_sq += norm * norm;
    trace.records.push_back(
        {t, rg.risk, norm, sum_sq / static_cast<double>(t)});
    check(rg.risk, t);
    if (config.snapshot_every > 0 && (t - 1) % config.snapshot_every == 0) {
      trace.snapshots.push_back(
          {t,
           std::vector<double>(current.parameters().begin(),
                               current.parameters().end()),
           rg.gradient});
    }
    current.set_parameters(
        NoisyGdStep(current.parameters(), rg.gradient, trace.eta, noise_ptr));
  }
  trace.final_parameters.assign(current.parameters().begin(),
                                current.parameters().end());
  trace.final_risk = EmpiricalDistortionRisk(current, data, config.distortion);
  check(trace.final_risk, config.iterations + 1);
  return trace;
}

std::optional<double> EstimateBeta(const TrainTrace& trace) {
  std::optional<double> beta;
  for (std::size_t i = 1; i < trace.snapshots.size(); ++i) {
    const auto& a = trace.snapshots[i - 1];
    const auto& b = trace.snapshots[i];
    const double dtheta = DistanceBetween(a.theta, b.theta);
    if (dtheta == 0.0) continue;
    const double ratio = DistanceBetween(a.gradient, b.gradient) / dtheta;
    if (!beta || ratio > *beta) beta = ratio;
  }
  if (beta && *beta <= 0.0) return std::nullopt;
  return beta;
}

StationarityReport Stationarity(const TrainTrace& trace,
                                std::optional<double> beta) {
  if (trace.records.empty()) {
    throw Error(ErrorCode::kConfigError, "empty training trace");
  }
  StationarityReport report;
  if (beta) {
    if (!(*beta > 0.0)) throw Error(ErrorCode::kConfigError, "beta must be > 0");
    report.beta = *beta;
  } else {
    const auto estimate = EstimateBeta(trace);
    if (!estimate) {
      throw Error(ErrorCode::kConfigError,
                  "cannot estimate beta from the trace; supply it");
    }
    report.beta = *estimate;
    report.beta_estimated = true;
  }
  const auto& records = trace.records;
  const std::size_t t_count = records.size();
  report.average_sq_grad_norm = records.back().avg_sq_grad_norm;
  report.initial_risk = records.front().risk;
  report.best_risk = trace.final_risk;
  for (const auto& r : records) report.best_risk = std::min(report.best_risk, r.risk);
  const double root_t = std::sqrt(static_cast<double>(t_count));
  report.bound = 2.0 * report.beta / root_t *
                 (report.initial_risk - report.best_risk + 0.5 / report.beta);
  report.holds = report.average_sq_grad_norm <= report.bound;
  const std::size_t decile = std::max<std::size_t>(1, t_count / 10);
  report.first_decile_mean = MeanSquaredNorm(records, 0, decile);
  report.last_decile_mean = MeanSquaredNorm(records, t_count - decile, t_count);
  report.note =
      "left side is a single-run average over the noise, not its expectation; "
      "the minimum risk is replaced by the best observed risk";
  return report;
}

nlohmann::json StationarityToJson(const StationarityReport& report) {
  return {{"average_sq_grad_norm", report.average_sq_grad_norm},
          {"bound", report.bound},
          {"holds", report.holds},
          {"initial_risk", report.initial_risk},
          {"best_risk", report.best_risk},
          {"best_risk_is_surrogate", report.best_risk_is_surrogate},
          {"beta", report.beta},
          {"beta_estimated", report.beta_estimated},
          {"first_decile_mean", report.first_decile_mean},
          {"last_decile_mean", report.last_decile_mean},
          {"note", report.note}};
}

namespace {

double MinSortedGap(std::vector<double> losses) {
  std::sort(losses.begin(), losses.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < losses.size(); ++i) {
    gap = std::min(gap, losses[i] - losses[i - 1]);
  }
  return gap;
}

LossModel GradCheckModel(const GradCheckOptions& o) {
  switch (o.architecture) {
    case Architecture::kLinearSquared: return LossModel::Linear(o.feature_dim);
    case Architecture::kLogisticCrossEntropy:
      return LossModel::Logistic(o.feature_dim);
    case Architecture::kMlpTanh: return LossModel::Mlp(o.feature_dim, o.hidden);
  }
  throw Error(ErrorCode::kConfigError, "unknown architecture");
}

}  // namespace

GradCheckResult DirectionalGradientCheck(const GradCheckOptions& options) {
  if (!(options.step > 0.0) || options.num_examples == 0) {
    throw Error(ErrorCode::kConfigError,
                "gradient check needs a positive step and at least one example");
  }
  const LossModel shape = GradCheckModel(options);
  const std::size_t d = shape.num_parameters();
  const bool classification =
      options.architecture != Architecture::kLinearSquared;
  GradCheckResult result;
  result.trials = options.trials;

  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    CounterRng rng(DeriveSeed(DeriveSeed(options.seed, "gradcheck"), trial));
    std::vector<Example> data(options.num_examples);
    LossModel model = shape;
    std::vector<double> theta(d);
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt > options.max_redraws) {
        throw Error(ErrorCode::kConfigError,
                    "no tie-free point found; lower min_loss_gap");
      }
      for (auto& z : data) {
        z.x.resize(options.feature_dim);
        for (double& v : z.x) v = rng.Gaussian();
        z.y = classification ? (rng.Uniform() < 0.5 ? 0.0 : 1.0)
                             : rng.Gaussian();
      }
      for (double& v : theta) v = rng.Uniform(-1.0, 1.0);
      model.set_parameters(theta);
      if (MinSortedGap(ExampleLosses(model, data)) >= options.min_loss_gap) break;
      ++result.redraws;
    }

    std::vector<double> u(d);
    for (double& v : u) v = rng.Gaussian();
    const double norm = Norm(u);
    for (double& v : u) v /= norm;

    const RiskGradient rg = DistortionGradient(model, data, options.distortion);
    double analytic = 0.0;
    for (std::size_t j = 0; j < d; ++j) analytic += rg.gradient[j] * u[j];

    std::vector<double> plus = theta;
    std::vector<double> minus = theta;
    for (std::size_t j = 0; j < d; ++j) {
      plus[j] += options.step * u[j];
      minus[j] -= options.step * u[j];
    }
    const double fd =
        (EmpiricalDistortionRisk(model.WithParameters(plus), data,
                                 options.distortion) -
         EmpiricalDistortionRisk(model.WithParameters(minus), data,
                                 options.distortion)) /
        (2.0 * options.step);
    const double scale = std::max({1.0, std::abs(fd), std::abs(analytic)});
    result.max_relative_error =
        std::max(result.max_relative_error, std::abs(fd - analytic) / scale);
  }
  return result;
}

void WriteTraceCsv(const TrainTrace& trace, std::ostream& out) {
  out << "t,risk,grad_norm,avg_sq_grad_norm\n";
  for (const auto& r : trace.records) {
    out << r.t << ',' << FormatDouble(r.risk) << ',' << FormatDouble(r.grad_norm)
        << ',' << FormatDouble(r.avg_sq_grad_norm) << '\n';
  }
}

}  // namespace riskcdf
