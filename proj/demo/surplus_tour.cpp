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

// Library tour: take one aggregate market, print its monopoly benchmark,
// then walk the whole span of consumer surplus with verified segmentations.

#include <iostream>

#include "spseg/spseg.hpp"

using namespace spseg;

namespace {

void print_segmentation(const Segmentation& s) {
  const PriceAssignment prices = min_price_assignment(s);
  for (std::size_t i = 0; i < s.markets.size(); ++i) {
    if (is_zero_market(s.markets[i])) {
      continue;
    }
    std::cout << "    market " << i + 1 << " @ price "
              << to_string(prices[i]) << ":";
    for (const Rational& x : s.markets[i].masses) {
      std::cout << ' ' << to_string(x);
    }
    std::cout << '\n';
  }
}

}  // namespace

int main() {
  const ValuationGrid grid({rat(1), rat(2), rat(3)});
  const MarketVector aggregate{{rat(1, 3), rat(1, 3), rat(1, 3)}};

  const AggregateStats stats = aggregate_stats(grid, aggregate);
  std::cout << "uniform monopoly: v* = " << to_string(stats.v_star)
            << ", pi* = " << to_string(stats.pi_star)
            << ", u* = " << to_string(stats.u_star)
            << ", wbar = " << to_string(stats.w_bar) << "\n\n";

  const GreedyResult greedy = greedy_segmentation(grid, aggregate);
  std::cout << "greedy split (buyer-optimal):\n";
  print_segmentation(as_segmentation(greedy));

  std::cout << "\nconsumer surplus sweep:\n";
  const Rational u_low = stats.u_star;
  const Rational u_high = stats.w_bar - stats.pi_star;
  for (long long step = 0; step <= 4; ++step) {
    const Rational target = u_low + (u_high - u_low) * rat(step, 4);
    const TargetSolution sol = solve_target_u(greedy, target);
    const bool pass = !has_profitable_deviation(sol.segmentation, rat(0));
    std::cout << "  u = " << to_string(target) << "  (k = " << sol.params.k
              << ", alpha = " << to_string(sol.params.alpha)
              << ", merged share = " << to_string(sol.params.psi) << ")  "
              << (pass ? "strategy-proof" : "NOT strategy-proof") << "\n";
  }

  std::cout << "\nmobility can still be beaten in equilibrium:\n";
  const Segmentation spe_only{
      grid,
      {MarketVector{{rat(1, 3), rat(0), rat(1, 6)}},
       MarketVector{{rat(0), rat(1, 3), rat(1, 6)}}, zero_market(3)}};
  const StrategyProofEvidence ev = is_strategy_proof(spe_only, rat(0));
  print_segmentation(spe_only);
  for (const DeviationWitness& w : ev.witnesses) {
    std::cout << "    witness: value v" << w.valuation_index + 1
              << " moves X" << w.source_market + 1 << " -> X"
              << w.target_market + 1 << ", gain " << to_string(w.gain)
              << "\n";
  }
  const bool survives =
      spe_check(spe_only, {rat(1), rat(2), rat(1)},
                OffPathPolicy::kMaxOptimalPrice)
          .empty();
  std::cout << "    survives max-price subgame perfection: "
            << (survives ? "yes" : "no") << "\n";
  return 0;
}
