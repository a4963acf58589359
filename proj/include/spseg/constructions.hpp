// Copyright 2026 The spseg Authors
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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spseg/model.hpp"
#include "spseg/pricing.hpp"
#include "spseg/rational.hpp"

namespace spseg {

struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TargetOutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A market in which every supported valuation is an optimal price. With
// support S = {s_1 < ... < s_m} and total share a, the mass at each s is
// a * min(S) * (1/v_s - 1/v_next), the last term telescoping to zero. The
// telescoping sum makes the total mass a and the revenue a * min(S) at every
// supported price.
inline MarketVector extremal_market(const ValuationGrid& grid,
                                    const std::vector<std::size_t>& support_set,
                                    const Rational& share) {
  if (support_set.empty()) {
    throw ConstructionError("extremal market needs a nonempty support");
  }
  if (share <= Rational(0)) {
    throw ConstructionError("extremal market share must be positive");
  }
  for (std::size_t p = 0; p < support_set.size(); ++p) {
    if (support_set[p] >= grid.size()) {
      throw ConstructionError("support index out of range");
    }
    if (p > 0 && support_set[p - 1] >= support_set[p]) {
      throw ConstructionError("support indices must be strictly ascending");
    }
  }
  MarketVector m = zero_market(grid.size());
  const Rational& v_min = grid.value(support_set.front());
  for (std::size_t p = 0; p < support_set.size(); ++p) {
    const std::size_t j = support_set[p];
    const Rational inv_next = p + 1 < support_set.size()
                                  ? Rational(1) / grid.value(support_set[p + 1])
                                  : Rational(0);
    m.masses[j] = share * v_min * (Rational(1) / grid.value(j) - inv_next);
  }
  return m;
}

// Output of the greedy split: extremal markets in generation order, with the
// share extracted each round. Supports shrink strictly between rounds, so
// there are at most K rounds.
struct GreedyResult {
  ValuationGrid grid;
  std::vector<MarketVector> markets;
  std::vector<Rational> shares;

  std::size_t rounds() const { return markets.size(); }
};

namespace detail {

// Slot count: at least K markets and always one empty slot to move into.
inline Segmentation padded_segmentation(const ValuationGrid& grid,
                                        std::vector<MarketVector> markets) {
  const std::size_t n = std::max(grid.size(), markets.size() + 1);
  while (markets.size() < n) {
    markets.push_back(zero_market(grid.size()));
  }
  return Segmentation{grid, std::move(markets)};
}

}  // namespace detail

// Repeatedly packs the largest possible extremal market onto the support of
// the residual until no mass is left. Requires an aggregate with a unique
// optimal uniform price above v_1 (checked up front). Under minimum optimal
// pricing the result realizes producer surplus pi* and consumer surplus
// w_bar - pi*, and the last market's minimum optimal price is v*.
inline GreedyResult greedy_segmentation(const ValuationGrid& grid,
                                        const MarketVector& aggregate) {
  aggregate_stats(grid, aggregate);  // propagate validation errors
  GreedyResult out{grid, {}, {}};
  MarketVector residual = aggregate;
  std::vector<std::size_t> supp = support(residual);
  while (!supp.empty()) {
    const MarketVector unit = extremal_market(grid, supp, Rational(1));
    // Largest share keeping the residual nonnegative; the argmin coordinate
    // is exhausted, which shrinks the support for the next round.
    std::optional<Rational> share;
    for (const std::size_t j : supp) {
      const Rational ratio = residual.masses[j] / unit.masses[j];
      if (!share || ratio < *share) {
        share = ratio;
      }
    }
    MarketVector market = zero_market(grid.size());
    for (const std::size_t j : supp) {
      market.masses[j] = *share * unit.masses[j];
      residual.masses[j] -= market.masses[j];
    }
    out.markets.push_back(std::move(market));
    out.shares.push_back(*share);
    supp = support(residual);
  }
  return out;
}

inline Segmentation as_segmentation(const GreedyResult& greedy) {
  return detail::padded_segmentation(greedy.grid, greedy.markets);
}

// Merge family member: keep greedy markets 1..k-1, keep an alpha fraction of
// market k, and pool everything generated later (plus the remaining
// 1 - alpha fraction) into one last market. The merged market's minimum
// optimal price stays at v*. k is 1-based and must lie in [1, t-1].
inline Segmentation family_segmentation(const GreedyResult& greedy,
                                        std::size_t k, const Rational& alpha) {
  const std::size_t t = greedy.rounds();
  if (k < 1 || t < 2 || k > t - 1) {
    throw ConstructionError("merge index k = " + std::to_string(k) +
                            " must lie in [1, t-1] with t = " +
                            std::to_string(t));
  }
  if (alpha < Rational(0) || alpha > Rational(1)) {
    throw ConstructionError("alpha = " + to_string(alpha) +
                            " must lie in [0, 1]");
  }
  std::vector<MarketVector> markets;
  markets.reserve(k + 1);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    markets.push_back(greedy.markets[i]);
  }
  markets.push_back(scaled(greedy.markets[k - 1], alpha));
  MarketVector merged = scaled(greedy.markets[k - 1], Rational(1) - alpha);
  for (std::size_t j = k; j < t; ++j) {
    add_into(merged, greedy.markets[j]);
  }
  markets.push_back(std::move(merged));
  return detail::padded_segmentation(greedy.grid, std::move(markets));
}

struct FamilyParams {
  std::size_t k = 0;  // 1-based merge index
  Rational alpha;
  Rational psi;  // total mass of the merged market
};

struct TargetSolution {
  FamilyParams params;
  Segmentation segmentation;
  WelfareOutcome welfare;
};

// Finds the family member whose consumer surplus under minimum optimal
// pricing equals u_target exactly. Consumer surplus is affine in alpha for
// each k, so the equation is solved exactly; across candidates the one with
// the largest merged share psi wins (coarsest segmentation), with the
// smallest k breaking remaining ties.
inline TargetSolution solve_target_u(const GreedyResult& greedy,
                                     const Rational& u_target) {
  const std::size_t t = greedy.rounds();
  if (t < 2) {
    throw ConstructionError(
        "aggregate collapses to a single extremal market; no family to scan");
  }
  const auto evaluate = [&greedy](std::size_t k, const Rational& alpha) {
    Segmentation s = family_segmentation(greedy, k, alpha);
    WelfareOutcome w = welfare_of(s, min_price_assignment(s));
    return std::pair<Segmentation, WelfareOutcome>(std::move(s), std::move(w));
  };

  const Rational u_low = evaluate(1, Rational(0)).second.consumer_surplus;
  const Rational u_high =
      evaluate(t - 1, Rational(1)).second.consumer_surplus;
  if (u_target < u_low || u_target > u_high) {
    throw TargetOutOfRangeError("target consumer surplus " +
                                to_string(u_target) + " lies outside [" +
                                to_string(u_low) + ", " + to_string(u_high) +
                                "]");
  }

  std::optional<TargetSolution> best;
  for (std::size_t k = 1; k <= t - 1; ++k) {
    const Rational u0 = evaluate(k, Rational(0)).second.consumer_surplus;
    const Rational u1 = evaluate(k, Rational(1)).second.consumer_surplus;
    Rational alpha;
    if (u0 == u1) {
      if (u_target != u0) {
        continue;
      }
      alpha = Rational(0);  // flat segment: alpha = 0 merges the most
    } else if (u0 <= u_target && u_target <= u1) {
      alpha = (u_target - u0) / (u1 - u0);
    } else {
      continue;
    }
    auto [segmentation, welfare] = evaluate(k, alpha);
    const Rational psi = total_mass(segmentation.markets[k]);
    if (!best || psi > best->params.psi) {
      best = TargetSolution{FamilyParams{k, alpha, psi},
                            std::move(segmentation), std::move(welfare)};
    }
  }
  return best.value();  // coverage of [u_low, u_high] guarantees a candidate
}

}  // namespace spseg
