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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "riskcdf/csv.hpp"
#include "riskcdf/error.hpp"

namespace riskcdf {
namespace {

constexpr std::size_t kOceGridPoints = 1000;

double GridPoint(std::size_t k, std::size_t size) {
  return static_cast<double>(k) / static_cast<double>(size - 1);
}

void CheckAlpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0, 1], got " << alpha;
    throw Error(ErrorCode::kInvalidAlpha, msg.str());
  }
}

std::string WithParameter(const char* base, double parameter) {
  return std::string(base) + ":" + FormatDouble(parameter);
}

// Piecewise-linear interpolant through strictly increasing knots on [0, 1].
struct LinearTable {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> cumulative;  // integral of the interpolant up to x[k]

  double operator()(double t) const {
    if (t <= x.front()) return y.front();
    if (t >= x.back()) return y.back();
    const auto k = static_cast<std::size_t>(
        std::upper_bound(x.begin(), x.end(), t) - x.begin() - 1);
    const double w = (t - x[k]) / (x[k + 1] - x[k]);
    return y[k] + w * (y[k + 1] - y[k]);
  }

  double Integral(double t) const {
    t = std::clamp(t, x.front(), x.back());
    const auto k = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) -
                                 x.begin() - 1),
        x.size() - 2);
    const double h = t - x[k];
    const double slope = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    return cumulative[k] + y[k] * h + 0.5 * slope * h * h;
  }

  double MaxSlope() const {
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
      best = std::max(best, std::abs(y[k + 1] - y[k]) / (x[k + 1] - x[k]));
    }
    return best;
  }
};

std::shared_ptr<const LinearTable> MakeTable(
    std::vector<std::pair<double, double>> knots, ErrorCode code) {
  if (knots.size() < 2) {
    throw Error(code, "a table needs at least two knots");
  }
  auto table = std::make_shared<LinearTable>();
  for (const auto& [t, v] : knots) {
    if (!std::isfinite(t) || !std::isfinite(v)) {
      throw Error(code, "table entries must be finite");
    }
    if (!table->x.empty() && !(t > table->x.back())) {
      throw Error(code, "table abscissae must be strictly increasing");
    }
    table->x.push_back(t);
    table->y.push_back(v);
  }
  if (std::abs(table->x.front()) > kDistortionTolerance ||
      std::abs(table->x.back() - 1.0) > kDistortionTolerance) {
    throw Error(code, "table must span [0, 1]");
  }
  table->cumulative.assign(table->x.size(), 0.0);
  for (std::size_t k = 1; k < table->x.size(); ++k) {
    table->cumulative[k] =
        table->cumulative[k - 1] + 0.5 * (table->y[k] + table->y[k - 1]) *
                                       (table->x[k] - table->x[k - 1]);
  }
  return table;
}

std::vector<std::pair<double, double>> ReadKnots(const std::string& path) {
  // Accept files with or without a header row.
  CsvTable table = ReadCsv(path, /*has_header=*/false);
  if (!table.rows.empty()) {
    const auto& first = table.rows.front();
    const bool numeric = !first.empty() && [&] {
      try {
        ParseCell(first[0], 1, 1);
        return true;
      } catch (const Error&) {
        return false;
      }
    }();
    if (!numeric) table.rows.erase(table.rows.begin());
  }
  std::vector<std::pair<double, double>> knots;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != 2) {
      throw Error(ErrorCode::kFormatError,
                  path + ": row " + std::to_string(r + 1) +
                      " must have two columns");
    }
    knots.emplace_back(ParseCell(row[0], r + 1, 1), ParseCell(row[1], r + 1, 2));
  }
  return knots;
}

void ValidateDistortion(const std::string& name,
                        const DistortionSpec::Function& g) {
  if (!g) throw Error(ErrorCode::kInvalidDistortion, name + ": empty function");
  const double g0 = g(0.0);
  const double g1 = g(1.0);
  if (!(std::abs(g0) <= kDistortionTolerance) ||
      !(std::abs(g1 - 1.0) <= kDistortionTolerance)) {
    std::ostringstream msg;
    msg << name << ": need g(0) = 0 and g(1) = 1, got g(0) = " << g0
        << ", g(1) = " << g1;
    throw Error(ErrorCode::kInvalidDistortion, msg.str());
  }
  double prev = g0;
  for (std::size_t k = 1; k < kValidationGridSize; ++k) {
    const double t = GridPoint(k, kValidationGridSize);
    const double v = g(t);
    if (!std::isfinite(v) || v < prev - kDistortionTolerance) {
      std::ostringstream msg;
      msg << name << ": g is not non-decreasing near t = " << t;
      throw Error(ErrorCode::kInvalidDistortion, msg.str());
    }
    prev = v;
  }
}

double EstimateSlope(const DistortionSpec::Function& g) {
  const double dt = 1.0 / static_cast<double>(kValidationGridSize - 1);
  double best = 0.0;
  double prev = g(0.0);
  for (std::size_t k = 1; k < kValidationGridSize; ++k) {
    const double v = g(GridPoint(k, kValidationGridSize));
    best = std::max(best, std::abs(v - prev) / dt);
    prev = v;
  }
  return best;
}

// 5-point Gauss-Legendre on [lo, hi].
double GaussLegendre5(const SpectrumSpec::Function& f, double lo, double hi) {
  static constexpr std::array<double, 5> kNodes = {
      0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
      0.9061798459386640};
  static constexpr std::array<double, 5> kWeights = {
      0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
      0.2369268850561891, 0.2369268850561891};
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t k = 0; k < kNodes.size(); ++k) {
    sum += kWeights[k] * f(mid + half * kNodes[k]);
  }
  return half * sum;
}

double ResolveSupport(const EmpiricalCdf& cdf, std::optional<double> bound) {
  const double d = bound.value_or(cdf.max());
  if (!(d >= cdf.max()) || !std::isfinite(d)) {
    std::ostringstream msg;
    msg << "support bound " << d << " is below the sample maximum "
        << cdf.max();
    throw Error(ErrorCode::kSupportViolation, msg.str());
  }
  return d;
}

void CheckOceSupport(const EmpiricalCdf& cdf, const OceSpec& spec) {
  if (cdf.min() < 0.0 || cdf.max() > spec.support_bound()) {
    std::ostringstream msg;
    msg << "losses must lie in [0, " << spec.support_bound() << "]";
    throw Error(ErrorCode::kSupportViolation, msg.str());
  }
}

// Minimizes a function over [0, D]: coarse grid, then golden-section search
// on the bracket around the best grid point. Returns the smallest value seen.
template <typename Objective>
double GridGoldenMinimize(Objective&& f, double support_bound,
                          double tolerance) {
  if (support_bound == 0.0) return f(0.0);
  std::size_t best_k = 0;
  double best = f(0.0);
  for (std::size_t k = 1; k < kOceGridPoints; ++k) {
    const double v = f(support_bound * GridPoint(k, kOceGridPoints));
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  double a = support_bound * GridPoint(best_k == 0 ? 0 : best_k - 1,
                                       kOceGridPoints);
  double b = support_bound *
             GridPoint(std::min(best_k + 1, kOceGridPoints - 1), kOceGridPoints);
  const double inv_golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_golden * (b - a);
  double d = a + inv_golden * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_golden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_golden * (b - a);
      fd = f(d);
    }
  }
  return std::min({best, fc, fd});
}

}  // namespace

const char* ConstantKindName(ConstantKind kind) {
  switch (kind) {
    case ConstantKind::kClosedForm: return "closed_form";
    case ConstantKind::kSupplied: return "supplied";
    case ConstantKind::kEstimated: return "estimated";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// DistortionSpec

DistortionSpec::DistortionSpec(std::string name, Function g, double lipschitz,
                               ConstantKind kind)
    : name_(std::move(name)),
      g_(std::move(g)),
      lipschitz_(lipschitz),
      lipschitz_kind_(kind) {
  ValidateDistortion(name_, g_);
}

DistortionSpec DistortionSpec::Identity() {
  return DistortionSpec("mean", [](double t) { return t; }, 1.0,
                        ConstantKind::kClosedForm);
}

DistortionSpec DistortionSpec::Cvar(double alpha) {
  CheckAlpha(alpha);
  return DistortionSpec(
      WithParameter("cvar", alpha),
      [alpha](double t) { return std::min(t / alpha, 1.0); }, 1.0 / alpha,
      ConstantKind::kClosedForm);
}

DistortionSpec DistortionSpec::FromTable(
    std::vector<std::pair<double, double>> knots, std::string name) {
  auto table = MakeTable(std::move(knots), ErrorCode::kInvalidDistortion);
  const double slope = table->MaxSlope();
  return DistortionSpec(
      std::move(name), [table](double t) { return (*table)(t); }, slope,
      ConstantKind::kClosedForm);
}

DistortionSpec DistortionSpec::FromCsv(const std::string& path) {
  return FromTable(ReadKnots(path), "distortion:" + path);
}

DistortionSpec DistortionSpec::Custom(std::string name, Function g,
                                      std::optional<double> lipschitz) {
  if (!g) throw Error(ErrorCode::kInvalidDistortion, name + ": empty function");
  if (lipschitz) {
    return DistortionSpec(std::move(name), std::move(g), *lipschitz,
                          ConstantKind::kSupplied);
  }
  const double slope = EstimateSlope(g);
  return DistortionSpec(std::move(name), std::move(g), slope,
                        ConstantKind::kEstimated);
}

// ---------------------------------------------------------------------------
// SpectrumSpec

SpectrumSpec::SpectrumSpec(std::string name, Function h, Function cumulative)
    : name_(std::move(name)), h_(std::move(h)), cumulative_(std::move(cumulative)) {
  if (!h_) throw Error(ErrorCode::kInvalidSpectrum, name_ + ": empty function");
  double prev = h_(0.0);
  for (std::size_t k = 0; k < kValidationGridSize; ++k) {
    const double u = GridPoint(k, kValidationGridSize);
    const double v = h_(u);
    if (!std::isfinite(v) || v < -kDistortionTolerance) {
      throw Error(ErrorCode::kInvalidSpectrum,
                  name_ + ": spectrum must be finite and nonnegative");
    }
    if (v < prev - kDistortionTolerance) {
      std::ostringstream msg;
      msg << name_ << ": spectrum is not non-decreasing near u = " << u;
      throw Error(ErrorCode::kInvalidSpectrum, msg.str());
    }
    prev = v;
  }
  double total;
  if (cumulative_) {
    total = cumulative_(1.0) - cumulative_(0.0);
  } else {
    // Midpoint rule over the cells of the validation grid.
    const double du = 1.0 / static_cast<double>(kValidationGridSize - 1);
    total = 0.0;
    for (std::size_t k = 0; k + 1 < kValidationGridSize; ++k) {
      total += h_((static_cast<double>(k) + 0.5) * du) * du;
    }
  }
  if (!(std::abs(total - 1.0) <= kSpectrumMassTolerance)) {
    std::ostringstream msg;
    msg << name_ << ": spectrum integrates to " << total << ", expected 1";
    throw Error(ErrorCode::kInvalidSpectrum, msg.str());
  }
}

SpectrumSpec SpectrumSpec::Uniform() {
  return SpectrumSpec("uniform", [](double) { return 1.0; },
                      [](double u) { return u; });
}

SpectrumSpec SpectrumSpec::Cvar(double alpha) {
  CheckAlpha(alpha);
  const double cut = 1.0 - alpha;
  return SpectrumSpec(
      WithParameter("cvar_spectrum", alpha),
      [cut, alpha](double u) { return u >= cut ? 1.0 / alpha : 0.0; },
      [cut, alpha](double u) { return std::max(u - cut, 0.0) / alpha; });
}

SpectrumSpec SpectrumSpec::FromTable(std::vector<std::pair<double, double>> knots,
                                     std::string name) {
  auto table = MakeTable(std::move(knots), ErrorCode::kInvalidSpectrum);
  return SpectrumSpec(
      std::move(name), [table](double u) { return (*table)(u); },
      [table](double u) { return table->Integral(u); });
}

SpectrumSpec SpectrumSpec::FromCsv(const std::string& path) {
  return FromTable(ReadKnots(path), "spectral:" + path);
}

SpectrumSpec SpectrumSpec::Custom(std::string name, Function h,
                                  Function cumulative) {
  return SpectrumSpec(std::move(name), std::move(h), std::move(cumulative));
}

double SpectrumSpec::Mass(double lo, double hi) const {
  if (cumulative_) return cumulative_(hi) - cumulative_(lo);
  return GaussLegendre5(h_, lo, hi);
}

DistortionSpec SpectrumSpec::ToDistortion() const {
  const SpectrumSpec copy = *this;
  return DistortionSpec::Custom(
      name_, [copy](double t) { return copy.Mass(1.0 - t, 1.0); }, sup());
}

// ---------------------------------------------------------------------------
// OceSpec

OceSpec::OceSpec(std::string name, Function phi, double support_bound)
    : name_(std::move(name)), phi_(std::move(phi)), support_bound_(support_bound) {
  if (!phi_) throw Error(ErrorCode::kConfigError, name_ + ": empty function");
  if (!(support_bound_ >= 0.0) || !std::isfinite(support_bound_)) {
    throw Error(ErrorCode::kConfigError,
                name_ + ": support bound must be finite and nonnegative");
  }
  if (!(std::abs(phi_(0.0)) <= kDistortionTolerance)) {
    throw Error(ErrorCode::kConfigError, name_ + ": need phi(0) = 0");
  }
  double prev = phi_(-support_bound_);
  for (std::size_t k = 1; k < kValidationGridSize; ++k) {
    const double x =
        -support_bound_ + 2.0 * support_bound_ * GridPoint(k, kValidationGridSize);
    const double v = phi_(x);
    if (!std::isfinite(v) || v < prev - kDistortionTolerance) {
      throw Error(ErrorCode::kConfigError,
                  name_ + ": phi must be finite and non-decreasing on [-D, D]");
    }
    prev = v;
  }
}

OceSpec OceSpec::Mean(double support_bound) {
  return OceSpec("oce:mean", [](double x) { return x; }, support_bound);
}

OceSpec OceSpec::Cvar(double alpha, double support_bound) {
  CheckAlpha(alpha);
  return OceSpec(
      WithParameter("oce:cvar", alpha),
      [alpha](double x) { return std::max(x, 0.0) / alpha; }, support_bound);
}

OceSpec OceSpec::Entropic(double gamma, double support_bound) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::kConfigError, "entropic gamma must be positive");
  }
  return OceSpec(
      WithParameter("oce:entropic", gamma),
      [gamma](double x) { return std::expm1(gamma * x) / gamma; },
      support_bound);
}

OceSpec OceSpec::Custom(std::string name, Function phi, double support_bound) {
  return OceSpec(std::move(name), std::move(phi), support_bound);
}

OceSpec& OceSpec::set_tolerance(double tolerance) {
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::kConfigError, "tolerance must be positive");
  }
  tolerance_ = tolerance;
  return *this;
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<double> DistortionWeights(std::size_t n, const DistortionSpec& g) {
  std::vector<double> weights(n);
  const double dn = static_cast<double>(n);
  double upper = g(1.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double lower = g(static_cast<double>(n - i) / dn);
    weights[i - 1] = upper - lower;
    upper = lower;
  }
  return weights;
}

double DistortionRiskSorted(std::span<const double> sorted_losses,
                            const DistortionSpec& g) {
  const std::size_t n = sorted_losses.size();
  if (n == 0) throw Error(ErrorCode::kEmptySample, "no losses");
  const double dn = static_cast<double>(n);
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = sorted_losses[i - 1];
    total += g(static_cast<double>(n - i + 1) / dn) * (x - prev);
    prev = x;
  }
  return total;
}

RiskValue DistortionRisk(const EmpiricalCdf& cdf, const DistortionSpec& g,
                         std::optional<double> support_bound) {
  const double d = ResolveSupport(cdf, support_bound);
  return {DistortionRiskSorted(cdf.values(), g), g.name(),
          {d * g.lipschitz(), 1.0, "sup_norm", g.lipschitz_kind()}};
}

RiskValue Cvar(const EmpiricalCdf& cdf, double alpha,
               std::optional<double> support_bound) {
  return DistortionRisk(cdf, DistortionSpec::Cvar(alpha), support_bound);
}

RiskValue SpectralRisk(const EmpiricalCdf& cdf, const SpectrumSpec& spectrum,
                       std::optional<double> support_bound) {
  const double d = ResolveSupport(cdf, support_bound);
  const auto values = cdf.values();
  const double dn = static_cast<double>(values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = spectrum.Mass(static_cast<double>(i) / dn,
                                   static_cast<double>(i + 1) / dn);
    total += w * values[i];
  }
  return {total, spectrum.name(),
          {d * spectrum.sup(), 1.0, "sup_norm", ConstantKind::kClosedForm}};
}

RiskValue OceRisk(const EmpiricalCdf& cdf, const OceSpec& spec) {
  CheckOceSupport(cdf, spec);
  const auto values = cdf.values();
  const double dn = static_cast<double>(values.size());
  auto objective = [&](double lambda) {
    double sum = 0.0;
    for (double x : values) sum += spec(x - lambda);
    return lambda + sum / dn;
  };
  const double value =
      GridGoldenMinimize(objective, spec.support_bound(), spec.tolerance());
  return {value, spec.name(),
          {OceLipschitzConstant(spec, 1001, OceDirection::kRiskAverse), 1.0,
           "sup_norm", ConstantKind::kEstimated}};
}

RiskValue InvertedOceRisk(const EmpiricalCdf& cdf, const OceSpec& spec) {
  CheckOceSupport(cdf, spec);
  const auto values = cdf.values();
  const double dn = static_cast<double>(values.size());
  auto negated = [&](double lambda) {
    double sum = 0.0;
    for (double x : values) sum += spec(lambda - x);
    return -(lambda - sum / dn);
  };
  const double value =
      -GridGoldenMinimize(negated, spec.support_bound(), spec.tolerance());
  return {value, "inverted_" + spec.name(),
          {OceLipschitzConstant(spec, 1001, OceDirection::kInverted), 1.0,
           "sup_norm", ConstantKind::kEstimated}};
}

RiskValue MeanVariance(const EmpiricalCdf& cdf, double c,
                       std::optional<double> support_bound) {
  if (!(c >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "mean-variance weight must be >= 0");
  }
  const double d = ResolveSupport(cdf, support_bound);
  const double m1 = Moment(cdf, 1);
  const double m2 = Moment(cdf, 2);
  // On [0, D]: |dE[U]| <= D*e, |dE[U^2]| <= D^2*e, |d(E[U]^2)| <= 2D^2*e.
  return {m1 + c * (m2 - m1 * m1), WithParameter("mean_var", c),
          {d + 3.0 * c * d * d, 1.0, "sup_norm", ConstantKind::kClosedForm}};
}

double OceLipschitzConstant(const OceSpec& spec, std::size_t grid_size,
                            OceDirection direction) {
  const double d = spec.support_bound();
  if (grid_size < 2) grid_size = 2;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double x = d * GridPoint(k, grid_size);
    const double v = direction == OceDirection::kRiskAverse
                         ? spec(d - x) - spec(-x)
                         : spec(x) - spec(x - d);
    best = std::max(best, v);
  }
  return best;
}

double HolderRiskError(double lipschitz, double exponent, double epsilon) {
  if (epsilon == 0.0) return 0.0;
  return lipschitz * std::pow(epsilon, exponent);
}

}  // namespace riskcdf
