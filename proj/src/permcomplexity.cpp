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

#include "riskcdf/permcomplexity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "riskcdf/csv.hpp"
#include "riskcdf/error.hpp"
#include "riskcdf/parallel.hpp"
#include "riskcdf/rng.hpp"

namespace riskcdf {
namespace {

Permutation StableSortingPermutation(std::span<const double> row) {
  Permutation pi(row.size());
  std::iota(pi.begin(), pi.end(), 0);
  std::stable_sort(pi.begin(), pi.end(),
                   [&](int a, int b) { return row[a] < row[b]; });
  return pi;
}

// Exact set cover over at most 64 elements by depth-first branch and bound.
class CoverSearch {
 public:
  CoverSearch(std::vector<std::uint64_t> sets, std::uint64_t universe,
              std::vector<std::size_t> incumbent)
      : sets_(std::move(sets)), universe_(universe), best_(std::move(incumbent)) {
    for (std::size_t e = 0; e < 64; ++e) {
      for (std::size_t s = 0; s < sets_.size(); ++s) {
        if (sets_[s] >> e & 1U) containing_[e].push_back(s);
      }
    }
  }

  std::vector<std::size_t> Run() {
    std::vector<std::size_t> chosen;
    Search(universe_, chosen);
    return best_;
  }

 private:
  std::size_t LowerBound(std::uint64_t uncovered) const {
    int widest = 0;
    for (std::uint64_t s : sets_) {
      widest = std::max(widest, std::popcount(s & uncovered));
    }
    if (widest == 0) return sets_.size() + 1;  // infeasible
    const int left = std::popcount(uncovered);
    return static_cast<std::size_t>((left + widest - 1) / widest);
  }

  void Search(std::uint64_t uncovered, std::vector<std::size_t>& chosen) {
    if (uncovered == 0) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    if (chosen.size() + LowerBound(uncovered) >= best_.size()) return;

    // Branch on the uncovered element with the fewest covering sets.
    std::size_t pivot = 64;
    std::size_t fewest = sets_.size() + 1;
    for (std::uint64_t rest = uncovered; rest != 0; rest &= rest - 1) {
      const auto e = static_cast<std::size_t>(std::countr_zero(rest));
      if (containing_[e].size() < fewest) {
        fewest = containing_[e].size();
        pivot = e;
      }
    }
    std::vector<std::size_t> options = containing_[pivot];
    std::stable_sort(options.begin(), options.end(),
                     [&](std::size_t a, std::size_t b) {
                       return std::popcount(sets_[a] & uncovered) >
                              std::popcount(sets_[b] & uncovered);
                     });
    for (std::size_t s : options) {
      chosen.push_back(s);
      Search(uncovered & ~sets_[s], chosen);
      chosen.pop_back();
      if (chosen.size() + 1 >= best_.size()) return;
    }
  }

  std::vector<std::uint64_t> sets_;
  std::uint64_t universe_;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> containing_[64];
};

}  // namespace

bool WeakOrder::SortedBy(std::span<const int> pi) const {
  if (pi.size() != ranks.size()) return false;
  for (std::size_t i = 1; i < pi.size(); ++i) {
    if (ranks[pi[i - 1]] > ranks[pi[i]]) return false;
  }
  return true;
}

WeakOrder MakeWeakOrder(std::span<const double> losses) {
  for (double v : losses) {
    if (std::isnan(v)) throw Error(ErrorCode::kInvalidLoss, "NaN loss");
  }
  std::vector<double> distinct(losses.begin(), losses.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  WeakOrder order;
  order.ranks.reserve(losses.size());
  for (double v : losses) {
    order.ranks.push_back(static_cast<int>(
        std::lower_bound(distinct.begin(), distinct.end(), v) -
        distinct.begin()));
  }
  return order;
}

LossMatrix LossMatrix::FromRows(std::vector<std::vector<double>> rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::kEmptySample,
                "a loss matrix needs at least one row and one column");
  }
  const std::size_t n = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n) {
      throw Error(ErrorCode::kFormatError,
                  "row " + std::to_string(r + 1) + " has a different length");
    }
    for (double v : rows[r]) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidLoss,
                    "row " + std::to_string(r + 1) + " has a non-finite entry");
      }
    }
  }
  return LossMatrix(std::move(rows));
}

LossMatrix LossMatrix::FromHypotheses(std::span<const ExampleLoss> hypotheses,
                                      const Dataset& data) {
  std::vector<std::vector<double>> rows;
  rows.reserve(hypotheses.size());
  for (const auto& h : hypotheses) {
    std::vector<double> row;
    row.reserve(data.size());
    for (const auto& z : data.examples) row.push_back(h(z));
    rows.push_back(std::move(row));
  }
  return FromRows(std::move(rows));
}

LossMatrix LoadLossMatrixCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsv(path, /*has_header=*/false);
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<double> row;
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      row.push_back(ParseCell(table.rows[r][c], r + 1, c + 1));
    }
    rows.push_back(std::move(row));
  }
  return LossMatrix::FromRows(std::move(rows));
}

std::vector<WeakOrder> DistinctWeakOrders(const LossMatrix& m) {
  std::vector<WeakOrder> orders;
  for (const auto& row : m.rows()) orders.push_back(MakeWeakOrder(row));
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  return orders;
}

std::string_view CoverSolverName(CoverSolver solver) {
  return solver == CoverSolver::kExact ? "exact" : "greedy";
}

PermutationCover GreedyMinPermutations(const LossMatrix& m) {
  const auto orders = DistinctWeakOrders(m);
  std::vector<Permutation> candidates;
  for (const auto& row : m.rows()) {
    candidates.push_back(StableSortingPermutation(row));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  // covers[c][o]: candidate c sorts weak order o.
  std::vector<std::vector<char>> covers(candidates.size(),
                                        std::vector<char>(orders.size()));
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t o = 0; o < orders.size(); ++o) {
      covers[c][o] = orders[o].SortedBy(candidates[c]) ? 1 : 0;
    }
  }

  PermutationCover cover;
  cover.solver = CoverSolver::kGreedy;
  cover.distinct_weak_orders = orders.size();
  std::vector<char> covered(orders.size(), 0);
  std::size_t remaining = orders.size();
  while (remaining > 0) {
    std::size_t best = 0;
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      std::size_t gain = 0;
      for (std::size_t o = 0; o < orders.size(); ++o) {
        gain += (covers[c][o] && !covered[o]) ? 1 : 0;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    // Every order is sorted by its own row's permutation, so gain > 0.
    for (std::size_t o = 0; o < orders.size(); ++o) {
      if (covers[best][o] && !covered[o]) {
        covered[o] = 1;
        --remaining;
      }
    }
    cover.witnesses.push_back(candidates[best]);
  }
  cover.value = cover.witnesses.size();
  return cover;
}

PermutationCover ExactMinPermutations(const LossMatrix& m) {
  if (m.num_points() > kExactMaxPoints ||
      m.num_hypotheses() > kExactMaxHypotheses) {
    std::ostringstream msg;
    msg << "exact solver supports n <= " << kExactMaxPoints << " and |F| <= "
        << kExactMaxHypotheses << " (got n = " << m.num_points()
        << ", |F| = " << m.num_hypotheses() << "); use the greedy solver";
    throw Error(ErrorCode::kTooLarge, msg.str());
  }
  const auto orders = DistinctWeakOrders(m);
  const std::size_t count = orders.size();
  const std::uint64_t universe =
      count == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;

  // One representative permutation per distinct coverage mask.
  std::unordered_map<std::uint64_t, Permutation> by_mask;
  Permutation pi(m.num_points());
  std::iota(pi.begin(), pi.end(), 0);
  do {
    std::uint64_t mask = 0;
    for (std::size_t o = 0; o < count; ++o) {
      if (orders[o].SortedBy(pi)) mask |= std::uint64_t{1} << o;
    }
    if (mask != 0) by_mask.try_emplace(mask, pi);
  } while (std::next_permutation(pi.begin(), pi.end()));

  // Drop masks contained in another mask; they never improve a cover.
  std::vector<std::uint64_t> masks;
  for (const auto& [mask, _] : by_mask) masks.push_back(mask);
  std::sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });
  std::vector<std::uint64_t> maximal;
  for (std::uint64_t mask : masks) {
    const bool dominated =
        std::any_of(maximal.begin(), maximal.end(),
                    [mask](std::uint64_t big) { return (mask & ~big) == 0; });
    if (!dominated) maximal.push_back(mask);
  }

  // Greedy incumbent expressed in terms of the maximal masks.
  const PermutationCover greedy = GreedyMinPermutations(m);
  std::vector<std::size_t> incumbent;
  for (const auto& w : greedy.witnesses) {
    std::uint64_t mask = 0;
    for (std::size_t o = 0; o < count; ++o) {
      if (orders[o].SortedBy(w)) mask |= std::uint64_t{1} << o;
    }
    for (std::size_t s = 0; s < maximal.size(); ++s) {
      if ((mask & ~maximal[s]) == 0) {
        incumbent.push_back(s);
        break;
      }
    }
  }

  CoverSearch search(maximal, universe, incumbent);
  const auto chosen = search.Run();

  PermutationCover cover;
  cover.solver = CoverSolver::kExact;
  cover.distinct_weak_orders = count;
  for (std::size_t s : chosen) cover.witnesses.push_back(by_mask.at(maximal[s]));
  cover.value = cover.witnesses.size();
  return cover;
}

bool VerifyCover(const LossMatrix& m, std::span<const Permutation> witnesses) {
  for (const auto& row : m.rows()) {
    const WeakOrder order = MakeWeakOrder(row);
    const bool sorted =
        std::any_of(witnesses.begin(), witnesses.end(),
                    [&](const Permutation& pi) { return order.SortedBy(pi); });
    if (!sorted) return false;
  }
  return true;
}

nlohmann::json CoverToJson(const PermutationCover& cover) {
  return {{"solver", std::string(CoverSolverName(cover.solver))},
          {"value", cover.value},
          {"value_kind",
           cover.solver == CoverSolver::kExact ? "exact" : "upper_bound"},
          {"distinct_weak_orders", cover.distinct_weak_orders},
          {"witness_permutations", cover.witnesses},
          {"index_base", 0}};
}

ComplexityEstimate MonteCarloPermutationComplexity(
    std::span<const ExampleLoss> hypotheses, const DataGenerator& generator,
    const ComplexityMonteCarloOptions& options) {
  if (options.reps == 0 || options.n == 0 || hypotheses.empty()) {
    throw Error(ErrorCode::kConfigError,
                "need at least one hypothesis, one point and one rep");
  }
  const bool exact_applies = options.n <= kExactMaxPoints &&
                             hypotheses.size() <= kExactMaxHypotheses;
  if (!exact_applies && !options.allow_greedy) {
    throw Error(ErrorCode::kTooLarge,
                "exact solver does not apply; enable greedy to get an upper "
                "bound estimate");
  }
  ComplexityEstimate est;
  est.values.assign(options.reps, 0);
  est.solvers.assign(options.reps,
                     exact_applies ? CoverSolver::kExact : CoverSolver::kGreedy);
  const std::uint64_t key = DeriveSeed(options.seed, "complexity_reps");
  ParallelFor(options.reps, options.threads, [&](std::size_t rep) {
    const Dataset data = generator(options.n, DeriveSeed(key, rep));
    const LossMatrix m = LossMatrix::FromHypotheses(hypotheses, data);
    est.values[rep] = exact_applies ? ExactMinPermutations(m).value
                                    : GreedyMinPermutations(m).value;
  });
  const double reps = static_cast<double>(options.reps);
  double sum = 0.0;
  for (auto v : est.values) sum += static_cast<double>(v);
  est.mean = sum / reps;
  double ss = 0.0;
  for (auto v : est.values) {
    const double d = static_cast<double>(v) - est.mean;
    ss += d * d;
  }
  est.std_error = options.reps > 1 ? std::sqrt(ss / (reps - 1.0) / reps) : 0.0;
  est.ci_low = est.mean - 1.96 * est.std_error;
  est.ci_high = est.mean + 1.96 * est.std_error;
  return est;
}

}  // namespace riskcdf
