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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riskcdf/csv.hpp"
#include "riskcdf/error.hpp"

namespace riskcdf {
namespace {

std::vector<double> CheckedSorted(std::span<const double> values,
                                  bool allow_negative) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptySample, "at least one sample is required");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || (!allow_negative && v < 0.0)) {
      std::ostringstream msg;
      msg << "entry " << i << " is " << v;
      throw Error(ErrorCode::kInvalidLoss, msg.str());
    }
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// Visits every distinct breakpoint of the merged samples in ascending order,
// passing (x, F_a(x-), F_b(x-), F_a(x), F_b(x)).
template <typename Visitor>
void WalkBreakpoints(const EmpiricalCdf& a, const EmpiricalCdf& b,
                     Visitor&& visit) {
  const auto va = a.values();
  const auto vb = b.values();
  const double na = static_cast<double>(va.size());
  const double nb = static_cast<double>(vb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < va.size() || j < vb.size()) {
    double x;
    if (j == vb.size() || (i < va.size() && va[i] <= vb[j])) {
      x = va[i];
    } else {
      x = vb[j];
    }
    const double left_a = static_cast<double>(i) / na;
    const double left_b = static_cast<double>(j) / nb;
    while (i < va.size() && va[i] == x) ++i;
    while (j < vb.size() && vb[j] == x) ++j;
    visit(x, left_a, left_b, static_cast<double>(i) / na,
          static_cast<double>(j) / nb);
  }
}

}  // namespace

EmpiricalCdf EmpiricalCdf::FromLosses(std::span<const double> losses) {
  return EmpiricalCdf(CheckedSorted(losses, /*allow_negative=*/false));
}

EmpiricalCdf EmpiricalCdf::FromSignedValues(std::span<const double> values) {
  return EmpiricalCdf(CheckedSorted(values, /*allow_negative=*/true));
}

double EmpiricalCdf::Eval(double r) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), r);
  return static_cast<double>(it - values_.begin()) /
         static_cast<double>(values_.size());
}

double EmpiricalCdf::LeftLimit(double r) const {
  const auto it = std::lower_bound(values_.begin(), values_.end(), r);
  return static_cast<double>(it - values_.begin()) /
         static_cast<double>(values_.size());
}

double EmpiricalCdf::Quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "quantile level must lie in (0, 1]");
  }
  const double n = static_cast<double>(values_.size());
  // Smallest k with k / n >= u.
  auto k = static_cast<std::size_t>(std::ceil(u * n));
  k = std::clamp<std::size_t>(k, 1, values_.size());
  return values_[k - 1];
}

std::vector<std::pair<double, double>> EmpiricalCdf::Breakpoints() const {
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i + 1 < values_.size() && values_[i + 1] == values_[i]) continue;
    out.emplace_back(values_[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

double SupNormDistance(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  double best = 0.0;
  WalkBreakpoints(a, b, [&](double, double la, double lb, double fa, double fb) {
    best = std::max({best, std::abs(la - lb), std::abs(fa - fb)});
  });
  return best;
}

double Wasserstein1(const EmpiricalCdf& a, const EmpiricalCdf& b,
                    double support_bound) {
  if (!(support_bound >= 0.0) || a.min() < 0.0 || b.min() < 0.0 ||
      a.max() > support_bound || b.max() > support_bound) {
    std::ostringstream msg;
    msg << "samples must lie in [0, " << support_bound << "]";
    throw Error(ErrorCode::kSupportViolation, msg.str());
  }
  // |F_a - F_b| is constant between consecutive merged breakpoints and zero
  // outside [first, last].
  double total = 0.0;
  double prev_x = 0.0;
  double prev_gap = 0.0;
  WalkBreakpoints(a, b, [&](double x, double, double, double fa, double fb) {
    total += prev_gap * (x - prev_x);
    prev_x = x;
    prev_gap = std::abs(fa - fb);
  });
  return total;
}

CdfDistanceReport CompareCdfs(const EmpiricalCdf& a, const EmpiricalCdf& b,
                              double support_bound) {
  return {SupNormDistance(a, b), Wasserstein1(a, b, support_bound),
          support_bound};
}

double Moment(const EmpiricalCdf& cdf, int k) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidOrder, "moment order must be >= 1");
  }
  double sum = 0.0;
  for (double v : cdf.values()) {
    double term = v;
    for (int p = 1; p < k; ++p) term *= v;
    sum += term;
  }
  return sum / static_cast<double>(cdf.size());
}

void WriteCdfCsv(const EmpiricalCdf& cdf, std::ostream& out) {
  out << "loss,cdf\n";
  for (const auto& [x, f] : cdf.Breakpoints()) {
    out << FormatDouble(x) << ',' << FormatDouble(f) << '\n';
  }
}

std::vector<double> ReadLossVectorCsv(const std::filesystem::path& path,
                                      bool has_header) {
  const CsvTable table = ReadCsv(path, has_header);
  std::vector<double> losses;
  losses.reserve(table.rows.size());
  const std::size_t first_row = has_header ? 2 : 1;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != 1) {
      throw Error(ErrorCode::kFormatError,
                  "row " + std::to_string(r + first_row) +
                      ": expected a single column");
    }
    losses.push_back(ParseCell(row[0], r + first_row, 1));
  }
  return losses;
}

}  // namespace riskcdf
