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
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spseg/model.hpp"
#include "spseg/pricing.hpp"
#include "spseg/rational.hpp"
#include "spseg/verifier.hpp"

namespace spseg {

struct NonIntegralGridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Desk-scale enumeration parameters. Every type's aggregate mass must be a
// multiple of 1/denominator. Guidance: K <= 3, denominator <= 18,
// max_markets <= 3 keeps runs well under a minute.
struct FrontierConfig {
  std::uint32_t denominator = 1;
  std::size_t max_markets = 1;
  Rational cost{0};
};

// One achievable surplus pair with a witness segmentation that attains it.
struct FrontierPoint {
  Rational pi;
  Rational u;
  Segmentation representative;
};

namespace detail {

// Lexicographic order on the flattened mass matrix; used both for the
// canonical (descending) market order inside a segmentation and to pick an
// order-independent representative per surplus point.
inline bool market_lex_less(const std::vector<std::uint64_t>& a,
                            const std::vector<std::uint64_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline bool segmentation_lex_less(const Segmentation& a,
                                  const Segmentation& b) {
  for (std::size_t i = 0; i < a.markets.size() && i < b.markets.size(); ++i) {
    for (std::size_t j = 0; j < a.grid.size(); ++j) {
      if (a.markets[i].masses[j] != b.markets[i].masses[j]) {
        return a.markets[i].masses[j] < b.markets[i].masses[j];
      }
    }
  }
  return a.markets.size() < b.markets.size();
}

}  // namespace detail

// Streams every way to distribute each type's denominator * mass units among
// max_markets markets, deduplicated by the canonical market order (markets
// sorted lexicographically descending, so one call per market multiset).
// Returns the number of distinct segmentations visited.
inline std::uint64_t enumerate_grid_segmentations(
    const ValuationGrid& grid, const MarketVector& aggregate,
    const FrontierConfig& config,
    const std::function<void(const Segmentation&)>& sink) {
  validate_market(grid, aggregate);
  if (config.denominator == 0) {
    throw std::invalid_argument("denominator must be positive");
  }
  if (config.max_markets == 0) {
    throw std::invalid_argument("max_markets must be positive");
  }
  const std::size_t k = grid.size();
  const std::size_t n = config.max_markets;
  std::vector<std::uint64_t> units(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Rational scaled_mass =
        aggregate.masses[j] * Rational(BigInt(config.denominator), BigInt(1));
    if (scaled_mass.denominator() != 1) {
      throw NonIntegralGridError(
          "aggregate mass " + to_string(aggregate.masses[j]) + " of v" +
          std::to_string(j + 1) + " is not a multiple of 1/" +
          std::to_string(config.denominator));
    }
    units[j] = scaled_mass.numerator().convert_to<std::uint64_t>();
  }

  // counts[j][i] = units of type j placed in market i.
  std::vector<std::vector<std::uint64_t>> counts(
      k, std::vector<std::uint64_t>(n, 0));
  const Rational quantum(BigInt(1), BigInt(config.denominator));
  std::uint64_t emitted = 0;

  const auto emit_if_canonical = [&]() {
    std::vector<std::uint64_t> column(k);
    std::vector<std::uint64_t> previous(k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        column[j] = counts[j][i];
      }
      if (i > 0 && detail::market_lex_less(previous, column)) {
        return;  // not sorted descending: a relabeling was already emitted
      }
      previous = column;
    }
    std::vector<MarketVector> markets;
    markets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      MarketVector m = zero_market(k);
      for (std::size_t j = 0; j < k; ++j) {
        m.masses[j] = Rational(BigInt(counts[j][i]), BigInt(1)) * quantum;
      }
      markets.push_back(std::move(m));
    }
    ++emitted;
    sink(Segmentation{grid, std::move(markets)});
  };

  // Nested composition scan: type j cycles over all ways to split units[j].
  const std::function<void(std::size_t)> scan_type = [&](std::size_t j) {
    if (j == k) {
      emit_if_canonical();
      return;
    }
    const std::function<void(std::size_t, std::uint64_t)> place =
        [&](std::size_t i, std::uint64_t remaining) {
          if (i == n - 1) {
            counts[j][i] = remaining;
            scan_type(j + 1);
            return;
          }
          for (std::uint64_t v = 0; v <= remaining; ++v) {
            counts[j][i] = v;
            place(i + 1, remaining - v);
          }
        };
    place(0, units[j]);
  };
  scan_type(0);
  return emitted;
}

struct FrontierSample {
  std::vector<FrontierPoint> points;  // ascending (pi, u)
  std::uint64_t enumerated = 0;
  std::uint64_t passing = 0;
};

// Filters the enumeration through the strategy-proofness probe at the
// configured cost and collects the distinct welfare pairs under minimum
// optimal pricing. This samples an inner approximation of the achievable
// set: only the minimum-optimal-price rule is exercised, while the outer
// bounds every point must satisfy come from the aggregate statistics.
// Representatives are the lexicographically smallest passing segmentation
// per point, so the output is independent of visit order.
inline FrontierSample sp_region_sample_report(const ValuationGrid& grid,
                                              const MarketVector& aggregate,
                                              const FrontierConfig& config) {
  FrontierSample out;
  std::map<std::pair<Rational, Rational>, Segmentation> best;
  out.enumerated = enumerate_grid_segmentations(
      grid, aggregate, config, [&](const Segmentation& s) {
        if (has_profitable_deviation(s, config.cost)) {
          return;
        }
        ++out.passing;
        const WelfareOutcome w = welfare_of(s, min_price_assignment(s));
        const std::pair<Rational, Rational> key(w.producer_surplus,
                                                w.consumer_surplus);
        const auto it = best.find(key);
        if (it == best.end()) {
          best.emplace(key, s);
        } else if (detail::segmentation_lex_less(s, it->second)) {
          it->second = s;
        }
      });
  out.points.reserve(best.size());
  for (auto& [key, representative] : best) {
    out.points.push_back(
        FrontierPoint{key.first, key.second, std::move(representative)});
  }
  return out;  // std::map iteration: ascending (pi, u)
}

inline std::vector<FrontierPoint> sp_region_sample(
    const ValuationGrid& grid, const MarketVector& aggregate,
    const FrontierConfig& config) {
  return sp_region_sample_report(grid, aggregate, config).points;
}

}  // namespace spseg
