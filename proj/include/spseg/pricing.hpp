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

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spseg/model.hpp"
#include "spseg/rational.hpp"

namespace spseg {

struct NonUniqueOptimumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateAssumptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateMarketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonRationalAssignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Revenue from charging the grid price v_{j+1}: the price times the mass of
// consumers who value the good at or above it.
inline Rational revenue(const ValuationGrid& grid, const MarketVector& m,
                        std::size_t price_index) {
  validate_market(grid, m);
  if (price_index >= grid.size()) {
    throw std::out_of_range("price index " + std::to_string(price_index) +
                            " exceeds grid size " +
                            std::to_string(grid.size()));
  }
  Rational tail(0);
  for (std::size_t j = price_index; j < m.masses.size(); ++j) {
    tail += m.masses[j];
  }
  return grid.value(price_index) * tail;
}

// The pricing maximand at an arbitrary nonnegative price. Only grid prices
// can ever be optimal: anything in between is dominated by the next grid
// value up, and anything above v_K sells nothing.
inline Rational revenue_at(const ValuationGrid& grid, const MarketVector& m,
                           const Rational& price) {
  validate_market(grid, m);
  if (price < Rational(0)) {
    throw std::out_of_range("price must be nonnegative");
  }
  Rational tail(0);
  for (std::size_t j = 0; j < m.masses.size(); ++j) {
    if (grid.value(j) >= price) {
      tail += m.masses[j];
    }
  }
  return price * tail;
}

struct OptimalPriceSet {
  std::vector<std::size_t> indices;  // ascending grid indices of the argmax
  bool degenerate = false;  // all-zero market: every grid price earns zero
};

inline OptimalPriceSet optimal_price_set(const ValuationGrid& grid,
                                         const MarketVector& m) {
  validate_market(grid, m);
  std::vector<Rational> revenues;
  revenues.reserve(grid.size());
  Rational tail(0);
  for (std::size_t j = grid.size(); j-- > 0;) {
    tail += m.masses[j];
    revenues.push_back(grid.value(j) * tail);
  }
  std::reverse(revenues.begin(), revenues.end());
  const Rational best = *std::max_element(revenues.begin(), revenues.end());
  OptimalPriceSet out;
  for (std::size_t j = 0; j < revenues.size(); ++j) {
    if (revenues[j] == best) {
      out.indices.push_back(j);
    }
  }
  out.degenerate = best == Rational(0);
  return out;
}

inline Rational min_optimal_price(const ValuationGrid& grid,
                                  const MarketVector& m) {
  const OptimalPriceSet opt = optimal_price_set(grid, m);
  if (opt.degenerate) {
    throw DegenerateMarketError(
        "empty market has no distinguished optimal price");
  }
  return grid.value(opt.indices.front());
}

inline Rational max_optimal_price(const ValuationGrid& grid,
                                  const MarketVector& m) {
  const OptimalPriceSet opt = optimal_price_set(grid, m);
  if (opt.degenerate) {
    throw DegenerateMarketError(
        "empty market has no distinguished optimal price");
  }
  return grid.value(opt.indices.back());
}

namespace detail {

// Price selected once an infinitesimal mass of value v_{k+1} enters a market
// whose optimal price set is `opt`. The entrant's revenue contribution breaks
// ties inside opt: among optimal prices not exceeding v_{k+1} the largest one
// wins; if none qualifies every tie stands and the minimum is kept.
inline Rational perturbed_limit_from(const ValuationGrid& grid,
                                     const OptimalPriceSet& opt,
                                     std::size_t entrant_index) {
  std::optional<std::size_t> best;
  for (const std::size_t idx : opt.indices) {
    if (idx <= entrant_index) {
      best = idx;
    }
  }
  return grid.value(best ? *best : opt.indices.front());
}

}  // namespace detail

// The minimum optimal price of m + eps * e_k as eps -> 0+, computed
// symbolically as a lexicographic argmax (base revenue first, entrant
// contribution second). Equals the minimum optimal price of m + eps * e_k for
// every eps in (0, r / v_K), r being the market's minimum revenue gap.
inline Rational perturbed_min_price_limit(const ValuationGrid& grid,
                                          const MarketVector& m,
                                          std::size_t entrant_index) {
  if (entrant_index >= grid.size()) {
    throw std::out_of_range("entrant valuation index out of range");
  }
  return detail::perturbed_limit_from(grid, optimal_price_set(grid, m),
                                      entrant_index);
}

// Smallest margin by which a suboptimal grid price loses in this market.
// nullopt means every grid price earns the same revenue.
inline std::optional<Rational> market_min_revenue_gap(const ValuationGrid& grid,
                                                      const MarketVector& m) {
  validate_market(grid, m);
  std::vector<Rational> revenues;
  revenues.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    revenues.push_back(revenue(grid, m, j));
  }
  const Rational best = *std::max_element(revenues.begin(), revenues.end());
  std::optional<Rational> gap;
  for (const Rational& r : revenues) {
    if (r == best) {
      continue;
    }
    const Rational d = best - r;
    if (!gap || d < *gap) {
      gap = d;
    }
  }
  return gap;
}

// Minimum over the nonzero markets of the per-market revenue gap; nullopt
// when every grid price is optimal in every nonzero market.
inline std::optional<Rational> min_revenue_gap(const Segmentation& s) {
  std::optional<Rational> gap;
  for (const MarketVector& m : s.markets) {
    if (is_zero_market(m)) {
      continue;
    }
    const std::optional<Rational> g = market_min_revenue_gap(s.grid, m);
    if (g && (!gap || *g < *gap)) {
      gap = g;
    }
  }
  return gap;
}

struct SurplusPoint {
  Rational pi;
  Rational u;

  friend bool operator==(const SurplusPoint&, const SurplusPoint&) = default;
};

// Uniform-monopoly statistics of an aggregate market together with the
// surplus-triangle vertices: A uniform monopoly, B full surplus extraction,
// C buyer-optimal, D minimum total surplus.
struct AggregateStats {
  Rational v_star;
  std::size_t v_star_index = 0;
  Rational pi_star;
  Rational u_star;
  Rational w_bar;
  SurplusPoint a;
  SurplusPoint b;
  SurplusPoint c;
  SurplusPoint d;
};

inline AggregateStats aggregate_stats(const ValuationGrid& grid,
                                      const MarketVector& aggregate) {
  const OptimalPriceSet opt = optimal_price_set(grid, aggregate);
  if (opt.degenerate) {
    throw DegenerateMarketError("aggregate market carries no mass");
  }
  if (opt.indices.size() > 1) {
    throw NonUniqueOptimumError(
        "grid prices " + to_string(grid.value(opt.indices[0])) + " and " +
        to_string(grid.value(opt.indices[1])) +
        " tie for the optimal uniform price");
  }
  const std::size_t star = opt.indices.front();
  if (star == 0) {
    throw DegenerateAssumptionError(
        "optimal uniform price equals the lowest valuation v1 = " +
        to_string(grid.value(0)));
  }
  AggregateStats out;
  out.v_star = grid.value(star);
  out.v_star_index = star;
  out.pi_star = revenue(grid, aggregate, star);
  out.u_star = Rational(0);
  out.w_bar = Rational(0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid.value(j) > out.v_star) {
      out.u_star += (grid.value(j) - out.v_star) * aggregate.masses[j];
    }
    out.w_bar += grid.value(j) * aggregate.masses[j];
  }
  out.a = SurplusPoint{out.pi_star, out.u_star};
  out.b = SurplusPoint{out.w_bar, Rational(0)};
  out.c = SurplusPoint{out.pi_star, out.w_bar - out.pi_star};
  out.d = SurplusPoint{out.pi_star, Rational(0)};
  return out;
}

// One price per market. Valid assignments pick an optimal price of each
// market (any grid price qualifies for an empty market).
using PriceAssignment = std::vector<Rational>;

namespace detail {

// Grid index of an assigned price, after checking it is optimal in m.
inline std::size_t assignment_index(const ValuationGrid& grid,
                                    const MarketVector& m,
                                    const Rational& price,
                                    std::size_t market_index) {
  const auto& values = grid.values();
  const auto it = std::find(values.begin(), values.end(), price);
  if (it == values.end()) {
    throw NonRationalAssignmentError(
        "price " + to_string(price) + " for market " +
        std::to_string(market_index + 1) + " is not a grid value");
  }
  const std::size_t idx = static_cast<std::size_t>(it - values.begin());
  const OptimalPriceSet opt = optimal_price_set(grid, m);
  if (!std::binary_search(opt.indices.begin(), opt.indices.end(), idx)) {
    throw NonRationalAssignmentError(
        "price " + to_string(price) + " is not optimal in market " +
        std::to_string(market_index + 1));
  }
  return idx;
}

}  // namespace detail

inline void validate_assignment(const Segmentation& s,
                                const PriceAssignment& prices) {
  if (prices.size() != s.markets.size()) {
    throw NonRationalAssignmentError(
        "assignment covers " + std::to_string(prices.size()) +
        " markets, segmentation has " + std::to_string(s.markets.size()));
  }
  for (std::size_t i = 0; i < s.markets.size(); ++i) {
    detail::assignment_index(s.grid, s.markets[i], prices[i], i);
  }
}

// The minimum optimal price of every market. Empty markets get v_1, the
// minimum of their (degenerate) full-grid optimal set.
inline PriceAssignment min_price_assignment(const Segmentation& s) {
  PriceAssignment out;
  out.reserve(s.markets.size());
  for (const MarketVector& m : s.markets) {
    const OptimalPriceSet opt = optimal_price_set(s.grid, m);
    out.push_back(s.grid.value(opt.indices.front()));
  }
  return out;
}

// Producer surplus, consumer surplus and their sum under the given prices.
inline WelfareOutcome welfare_of(const Segmentation& s,
                                 const PriceAssignment& prices) {
  if (prices.size() != s.markets.size()) {
    throw NonRationalAssignmentError(
        "assignment covers " + std::to_string(prices.size()) +
        " markets, segmentation has " + std::to_string(s.markets.size()));
  }
  Rational pi(0);
  Rational u(0);
  for (std::size_t i = 0; i < s.markets.size(); ++i) {
    const MarketVector& m = s.markets[i];
    const std::size_t idx =
        detail::assignment_index(s.grid, m, prices[i], i);
    pi += revenue(s.grid, m, idx);
    for (std::size_t j = idx + 1; j < s.grid.size(); ++j) {
      u += (s.grid.value(j) - prices[i]) * m.masses[j];
    }
  }
  return WelfareOutcome{pi, u, pi + u};
}

}  // namespace spseg
