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

// Permutation complexity of a finite set of loss vectors.
//
// A permutation pi of the n data indices sorts a loss vector v when
// v[pi(0)] <= v[pi(1)] <= ... <= v[pi(n-1)]. The permutation complexity of a
// hypothesis set on fixed data is the smallest number of permutations such
// that every hypothesis' loss vector is sorted by at least one of them. Only
// the weak order (tie-aware ranking) of each vector matters, so the problem
// is a set cover over distinct weak orders.

#ifndef RISKCDF_PERMCOMPLEXITY_HPP_
#define RISKCDF_PERMCOMPLEXITY_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "riskcdf/data.hpp"
#include "riskcdf/models.hpp"

namespace riskcdf {

using Permutation = std::vector<int>;  // 0-based data indices

/// Dense tie-aware ranks: equal losses share a rank, ranks start at 0 and
/// are consecutive.
struct WeakOrder {
  std::vector<int> ranks;

  /// True iff ranks[pi[0]] <= ranks[pi[1]] <= ... (pi is a linear extension).
  bool SortedBy(std::span<const int> pi) const;

  friend auto operator<=>(const WeakOrder&, const WeakOrder&) = default;
};

/// Throws InvalidLoss on NaN.
WeakOrder MakeWeakOrder(std::span<const double> losses);

/// |F| loss vectors of a common length n (rows = hypotheses).
class LossMatrix {
 public:
  /// Throws EmptySample for no rows/columns, FormatError for ragged rows and
  /// InvalidLoss for non-finite entries.
  static LossMatrix FromRows(std::vector<std::vector<double>> rows);
  static LossMatrix FromHypotheses(std::span<const ExampleLoss> hypotheses,
                                   const Dataset& data);

  std::size_t num_hypotheses() const { return rows_.size(); }
  std::size_t num_points() const { return rows_.front().size(); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  explicit LossMatrix(std::vector<std::vector<double>> rows)
      : rows_(std::move(rows)) {}

  std::vector<std::vector<double>> rows_;
};

/// Reads a headerless CSV, one hypothesis per row.
LossMatrix LoadLossMatrixCsv(const std::filesystem::path& path);

std::vector<WeakOrder> DistinctWeakOrders(const LossMatrix& m);

enum class CoverSolver { kExact, kGreedy };
std::string_view CoverSolverName(CoverSolver solver);

struct PermutationCover {
  CoverSolver solver = CoverSolver::kExact;
  std::size_t value = 0;  // exact minimum, or an upper bound for greedy
  std::vector<Permutation> witnesses;
  std::size_t distinct_weak_orders = 0;
};

inline constexpr std::size_t kExactMaxPoints = 8;
inline constexpr std::size_t kExactMaxHypotheses = 64;

/// Exact minimum by depth-first branch and bound over all n! permutations,
/// seeded with the greedy cover. Throws TooLarge when n > 8 or |F| > 64.
PermutationCover ExactMinPermutations(const LossMatrix& m);

/// Greedy set cover using each row's stable sorting permutation as the
/// candidate pool. Never exceeds the number of distinct weak orders.
PermutationCover GreedyMinPermutations(const LossMatrix& m);

/// True iff every row of `m` is sorted by at least one witness.
bool VerifyCover(const LossMatrix& m, std::span<const Permutation> witnesses);

nlohmann::json CoverToJson(const PermutationCover& cover);

struct ComplexityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // mean -/+ 1.96 standard errors
  double ci_high = 0.0;
  std::vector<std::size_t> values;
  std::vector<CoverSolver> solvers;
};

struct ComplexityMonteCarloOptions {
  std::size_t n = 5;
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  /// When the exact solver does not apply, use greedy (the mean is then an
  /// upper-bound estimate) instead of failing with TooLarge.
  bool allow_greedy = false;
  std::size_t threads = 1;
};

/// Averages the instance permutation complexity over fresh n-point datasets.
ComplexityEstimate MonteCarloPermutationComplexity(
    std::span<const ExampleLoss> hypotheses, const DataGenerator& generator,
    const ComplexityMonteCarloOptions& options);

}  // namespace riskcdf

#endif  // RISKCDF_PERMCOMPLEXITY_HPP_
