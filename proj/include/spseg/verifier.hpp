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
#include <utility>
#include <vector>

#include "spseg/model.hpp"
#include "spseg/pricing.hpp"
#include "spseg/rational.hpp"

namespace spseg {

enum class VerifierMode { kStrategyProof, kSubgamePerfect };

// How the producer prices a market an individual consumer moved into without
// changing its canonical vector.
enum class OffPathPolicy { kLimitMinPrice, kMaxOptimalPrice };

struct VerifierConfig {
  Rational cost{0};  // deviation cost c >= 0
  VerifierMode mode = VerifierMode::kStrategyProof;
  OffPathPolicy off_path_policy = OffPathPolicy::kLimitMinPrice;
};

// A supported valuation in the higher-priced market that falls in
// (low price, high price] but is not optimal in the lower-priced market.
struct IndifferenceViolation {
  std::size_t low_market;
  std::size_t high_market;
  std::size_t valuation_index;

  friend bool operator==(const IndifferenceViolation&,
                         const IndifferenceViolation&) = default;
};

// Checks, under minimum optimal pricing, that whenever two markets carry
// different prices every supported valuation of the pricier market lying in
// (low, high] is also optimal in the cheaper market. Empty markets are
// skipped. Violations are listed in ascending (low, high, valuation) order.
inline std::vector<IndifferenceViolation> indifference_check(
    const Segmentation& s) {
  const std::size_t n = s.markets.size();
  std::vector<std::optional<OptimalPriceSet>> opts(n);
  std::vector<std::vector<std::size_t>> supports(n);
  for (std::size_t i = 0; i < n; ++i) {
    supports[i] = support(s.markets[i]);
    if (!supports[i].empty()) {
      opts[i] = optimal_price_set(s.grid, s.markets[i]);
    }
  }
  std::vector<IndifferenceViolation> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!opts[i]) {
      continue;
    }
    const std::size_t low = opts[i]->indices.front();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !opts[j]) {
        continue;
      }
      const std::size_t high = opts[j]->indices.front();
      if (low >= high) {
        continue;
      }
      for (const std::size_t k : supports[j]) {
        if (k <= low || k > high) {
          continue;
        }
        if (!std::binary_search(opts[i]->indices.begin(),
                                opts[i]->indices.end(), k)) {
          out.push_back(IndifferenceViolation{i, j, k});
        }
      }
    }
  }
  return out;
}

namespace detail {

// Runs every single-move probe (source market j, supported valuation k,
// target i != j including one empty slot) and reports each strict gain to
// the visitor. Returns early once the visitor returns false. Payoffs are
// taken at the zero-mass limit: they are affine in the deviating mass, so a
// strict gain in the limit stays strict for every small enough mass.
template <typename Visitor>
inline void probe_min_price_deviations(const Segmentation& s,
                                       const Rational& cost,
                                       Visitor&& visit) {
  if (cost < Rational(0)) {
    throw std::invalid_argument("deviation cost must be nonnegative");
  }
  const std::size_t n = s.markets.size();
  std::vector<OptimalPriceSet> opts;
  opts.reserve(n);
  bool has_empty_slot = false;
  for (const MarketVector& m : s.markets) {
    opts.push_back(optimal_price_set(s.grid, m));
    has_empty_slot = has_empty_slot || is_zero_market(m);
  }
  // An unused slot always exists on path; add a virtual one when the
  // segmentation lists none. Entering it yields the entrant's own value as
  // price, hence zero payoff, so it never produces a witness.
  const std::size_t target_count = has_empty_slot ? n : n + 1;
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<std::size_t> supp = support(s.markets[j]);
    if (supp.empty()) {
      continue;
    }
    const Rational price_j = s.grid.value(opts[j].indices.front());
    for (const std::size_t k : supp) {
      const Rational& value = s.grid.value(k);
      const Rational stay =
          value > price_j ? value - price_j : Rational(0);
      for (std::size_t i = 0; i < target_count; ++i) {
        if (i == j) {
          continue;
        }
        const Rational faced =
            i < n ? perturbed_limit_from(s.grid, opts[i], k) : value;
        const Rational move = value > faced ? value - faced : Rational(0);
        const Rational gain = move - cost - stay;
        if (gain > Rational(0)) {
          if (!visit(DeviationWitness{j, k, i, gain})) {
            return;
          }
        }
      }
    }
  }
}

}  // namespace detail

// Every profitable single move under minimum optimal pricing, in ascending
// (source, valuation, target) order. Empty on strategy-proof segmentations.
inline std::vector<DeviationWitness> deviation_search(const Segmentation& s,
                                                      const Rational& cost) {
  std::vector<DeviationWitness> out;
  detail::probe_min_price_deviations(s, cost, [&out](DeviationWitness w) {
    out.push_back(std::move(w));
    return true;
  });
  return out;
}

inline bool has_profitable_deviation(const Segmentation& s,
                                     const Rational& cost) {
  bool found = false;
  detail::probe_min_price_deviations(s, cost, [&found](const DeviationWitness&) {
    found = true;
    return false;
  });
  return found;
}

struct StrategyProofEvidence {
  bool strategy_proof = false;
  std::vector<DeviationWitness> witnesses;
  // Independent cross-check: at c = 0 under minimum optimal pricing the
  // indifference condition holds exactly when no witness exists.
  std::vector<IndifferenceViolation> indifference_violations;
};

inline StrategyProofEvidence is_strategy_proof(const Segmentation& s,
                                               const Rational& cost) {
  StrategyProofEvidence out;
  out.witnesses = deviation_search(s, cost);
  out.strategy_proof = out.witnesses.empty();
  out.indifference_violations = indifference_check(s);
  return out;
}

// Checks survival as a subgame perfect equilibrium: an individual move never
// changes a canonical vector, and the mover faces the policy's price in the
// target market. Witnesses use the cost-free gain. The on-path assignment
// must be rational (each price optimal in its market).
inline std::vector<DeviationWitness> spe_check(const Segmentation& s,
                                               const PriceAssignment& on_path,
                                               OffPathPolicy policy) {
  validate_assignment(s, on_path);
  const std::size_t n = s.markets.size();
  std::vector<OptimalPriceSet> opts;
  opts.reserve(n);
  for (const MarketVector& m : s.markets) {
    opts.push_back(optimal_price_set(s.grid, m));
  }
  std::vector<DeviationWitness> out;
  for (std::size_t j = 0; j < n; ++j) {
    for (const std::size_t k : support(s.markets[j])) {
      const Rational& value = s.grid.value(k);
      const Rational stay =
          value > on_path[j] ? value - on_path[j] : Rational(0);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) {
          continue;
        }
        const Rational faced =
            policy == OffPathPolicy::kLimitMinPrice
                ? detail::perturbed_limit_from(s.grid, opts[i], k)
                : s.grid.value(opts[i].indices.back());
        const Rational move = value > faced ? value - faced : Rational(0);
        if (move > stay) {
          out.push_back(DeviationWitness{j, k, i, move - stay});
        }
      }
    }
  }
  return out;
}

struct VerifierReport {
  bool pass = false;
  std::vector<DeviationWitness> witnesses;
  std::vector<IndifferenceViolation> indifference_violations;
};

// Dispatch on the configured mode. Subgame-perfect mode prices the path with
// the minimum optimal price of each market and fixes the cost at zero.
inline VerifierReport run_verifier(const Segmentation& s,
                                   const VerifierConfig& config) {
  if (config.cost < Rational(0)) {
    throw std::invalid_argument("deviation cost must be nonnegative");
  }
  VerifierReport out;
  if (config.mode == VerifierMode::kStrategyProof) {
    StrategyProofEvidence ev = is_strategy_proof(s, config.cost);
    out.pass = ev.strategy_proof;
    out.witnesses = std::move(ev.witnesses);
    out.indifference_violations = std::move(ev.indifference_violations);
  } else {
    out.witnesses =
        spe_check(s, min_price_assignment(s), config.off_path_policy);
    out.pass = out.witnesses.empty();
  }
  return out;
}

}  // namespace spseg
