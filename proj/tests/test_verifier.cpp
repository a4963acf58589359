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

#include <random>
#include <tuple>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace spseg;

namespace {

ValuationGrid grid123() { return ValuationGrid({rat(1), rat(2), rat(3)}); }

MarketVector uniform_thirds() {
  return MarketVector{{rat(1, 3), rat(1, 3), rat(1, 3)}};
}

// Two markets with prices 1 and 2 where a value-2 entrant leaves the cheap
// market's price at 1: fails strategy-proofness, survives max-price SPE.
Segmentation spe_only_segmentation() {
  return Segmentation{grid123(),
                      {MarketVector{{rat(1, 3), rat(0), rat(1, 6)}},
                       MarketVector{{rat(0), rat(1, 3), rat(1, 6)}}}};
}

Segmentation greedy_benchmark() {
  return as_segmentation(greedy_segmentation(grid123(), uniform_thirds()));
}

}  // namespace

TEST_CASE("indifference_check flags unsupported intermediate values",
          "[verifier]") {
  const auto violations = indifference_check(spe_only_segmentation());
  REQUIRE(violations.size() == 1);
  CHECK(violations[0] == IndifferenceViolation{0, 1, 1});

  CHECK(indifference_check(greedy_benchmark()).empty());
  CHECK(indifference_check(Segmentation{grid123(), {uniform_thirds()}})
            .empty());
}

TEST_CASE("deviation_search finds the constructive witness", "[verifier]") {
  const auto witnesses = deviation_search(spe_only_segmentation(), rat(0));
  REQUIRE(witnesses.size() == 1);
  CHECK(witnesses[0] == DeviationWitness{1, 1, 0, rat(1)});

  CHECK(deviation_search(greedy_benchmark(), rat(0)).empty());
}

TEST_CASE("deviation_search respects the cost threshold", "[verifier]") {
  // The entrant's tie-break lifts the target's tied prices {1,2} to 2; the
  // value-3 mover gains exactly 1, which a cost of 1 absorbs.
  const Segmentation s{grid123(),
                       {MarketVector{{rat(0), rat(0), rat(1, 3)}},
                        MarketVector{{rat(1, 3), rat(1, 3), rat(0)}}}};
  const auto free_move = deviation_search(s, rat(0));
  REQUIRE(free_move.size() == 1);
  CHECK(free_move[0] == DeviationWitness{0, 2, 1, rat(1)});
  CHECK(deviation_search(s, rat(1)).empty());
  CHECK(has_profitable_deviation(s, rat(0)));
  CHECK_FALSE(has_profitable_deviation(s, rat(1)));
  CHECK_THROWS_AS(deviation_search(s, rat(-1)), std::invalid_argument);
}

TEST_CASE("is_strategy_proof bundles probe and indifference evidence",
          "[verifier]") {
  const StrategyProofEvidence good =
      is_strategy_proof(greedy_benchmark(), rat(0));
  CHECK(good.strategy_proof);
  CHECK(good.witnesses.empty());
  CHECK(good.indifference_violations.empty());

  const StrategyProofEvidence bad =
      is_strategy_proof(spe_only_segmentation(), rat(0));
  CHECK_FALSE(bad.strategy_proof);
  CHECK_FALSE(bad.witnesses.empty());
  CHECK_FALSE(bad.indifference_violations.empty());

  const GreedyResult g = greedy_segmentation(grid123(), uniform_thirds());
  const Segmentation member = family_segmentation(g, 1, rat(1, 2));
  CHECK(is_strategy_proof(member, rat(0)).strategy_proof);
}

TEST_CASE("buyer-optimal welfare does not imply strategy-proofness",
          "[verifier]") {
  // Direct-style split of (5/12, 1/6, 2/3): one market per price level, the
  // uniform monopoly price 3 stays optimal in every market (so pi = pi* = 2)
  // and each price equals its market's minimum supported value (efficient,
  // u = wbar - pi* = 3/4). Still not strategy-proof: price 2 is not optimal
  // in the cheap market, so a value-2 consumer moving there keeps its price
  // at 1 and pockets the difference.
  const ValuationGrid grid({rat(1), rat(2), rat(3)});
  const Segmentation s{grid,
                       {MarketVector{{rat(5, 12), rat(1, 12), rat(1, 4)}},
                        MarketVector{{rat(0), rat(1, 12), rat(1, 6)}},
                        MarketVector{{rat(0), rat(0), rat(1, 4)}}}};
  const AggregateStats stats = aggregate_stats(grid, s.aggregate());
  CHECK(stats.v_star == rat(3));
  CHECK(stats.pi_star == rat(2));
  CHECK(min_price_assignment(s) ==
        PriceAssignment{rat(1), rat(2), rat(3)});

  const WelfareOutcome w = welfare_of(s, min_price_assignment(s));
  CHECK(w.producer_surplus == stats.pi_star);
  CHECK(w.consumer_surplus == stats.w_bar - stats.pi_star);

  const StrategyProofEvidence ev = is_strategy_proof(s, rat(0));
  CHECK_FALSE(ev.strategy_proof);
  REQUIRE_FALSE(ev.witnesses.empty());
  CHECK(ev.witnesses[0] == DeviationWitness{1, 1, 0, rat(1)});
  REQUIRE_FALSE(ev.indifference_violations.empty());
  CHECK(ev.indifference_violations[0] == IndifferenceViolation{0, 1, 1});

  // the greedy split of the same aggregate reaches the same welfare and passes
  const Segmentation g =
      as_segmentation(greedy_segmentation(grid, s.aggregate()));
  const WelfareOutcome wg = welfare_of(g, min_price_assignment(g));
  CHECK(wg.producer_surplus == w.producer_surplus);
  CHECK(wg.consumer_surplus == w.consumer_surplus);
  CHECK(is_strategy_proof(g, rat(0)).strategy_proof);
}

TEST_CASE("spe_check distinguishes the off-path policies", "[verifier]") {
  const Segmentation s = spe_only_segmentation();
  const PriceAssignment prices{rat(1), rat(2)};

  CHECK(spe_check(s, prices, OffPathPolicy::kMaxOptimalPrice).empty());

  const auto limit = spe_check(s, prices, OffPathPolicy::kLimitMinPrice);
  REQUIRE_FALSE(limit.empty());
  CHECK(limit[0].source_market == 1);
  CHECK(limit[0].valuation_index == 1);
  CHECK(limit[0].target_market == 0);
  CHECK(limit[0].gain == rat(1));

  const Segmentation greedy = greedy_benchmark();
  CHECK(spe_check(greedy, min_price_assignment(greedy),
                  OffPathPolicy::kLimitMinPrice)
            .empty());

  CHECK_THROWS_AS(spe_check(s, {rat(2), rat(2)}, OffPathPolicy::kLimitMinPrice),
                  NonRationalAssignmentError);
}

TEST_CASE("run_verifier dispatches on the configured mode", "[verifier]") {
  const Segmentation s = spe_only_segmentation();

  VerifierConfig sp;
  sp.mode = VerifierMode::kStrategyProof;
  const VerifierReport r1 = run_verifier(s, sp);
  CHECK_FALSE(r1.pass);
  CHECK_FALSE(r1.indifference_violations.empty());

  VerifierConfig spe;
  spe.mode = VerifierMode::kSubgamePerfect;
  spe.off_path_policy = OffPathPolicy::kMaxOptimalPrice;
  CHECK(run_verifier(s, spe).pass);

  spe.off_path_policy = OffPathPolicy::kLimitMinPrice;
  CHECK_FALSE(run_verifier(s, spe).pass);

  VerifierConfig bad;
  bad.cost = rat(-1);
  CHECK_THROWS_AS(run_verifier(s, bad), std::invalid_argument);
}

TEST_CASE("probe search agrees with the indifference condition",
          "[verifier][oracle]") {
  std::mt19937 rng(67);
  int failing = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const Segmentation s = testing::random_segmentation(rng, 4, 4, 12);
    const bool indifferent = indifference_check(s).empty();
    const bool no_witness = deviation_search(s, rat(0)).empty();
    CHECK(indifferent == no_witness);
    failing += indifferent ? 0 : 1;
  }
  CHECK(failing > 50);  // the sample exercises both outcomes
  CHECK(failing < 550);
}

TEST_CASE("passing at a low cost implies passing at any higher cost",
          "[verifier]") {
  std::mt19937 rng(71);
  const std::vector<Rational> costs{rat(0), rat(1, 2), rat(1), rat(2)};
  for (int trial = 0; trial < 200; ++trial) {
    const Segmentation s = testing::random_segmentation(rng);
    bool passed_before = false;
    for (const Rational& c : costs) {
      const bool pass = !has_profitable_deviation(s, c);
      if (passed_before) {
        CHECK(pass);
      }
      passed_before = pass;
    }
  }
}

TEST_CASE("witness lists arrive in ascending probe order", "[verifier]") {
  std::mt19937 rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    const Segmentation s = testing::random_segmentation(rng);
    const auto witnesses = deviation_search(s, rat(0));
    for (std::size_t i = 1; i < witnesses.size(); ++i) {
      const auto& a = witnesses[i - 1];
      const auto& b = witnesses[i];
      const auto key = [](const DeviationWitness& w) {
        return std::tuple(w.source_market, w.valuation_index,
                          w.target_market);
      };
      CHECK(key(a) < key(b));
    }
    for (const DeviationWitness& w : witnesses) {
      CHECK(w.gain > rat(0));
      CHECK(w.source_market != w.target_market);
      CHECK(s.markets[w.source_market].masses[w.valuation_index] > rat(0));
    }
  }
}

TEST_CASE("every passing segmentation shows the monopoly fingerprint",
          "[verifier]") {
  std::mt19937 rng(79);
  int seen_passing = 0;
  for (int instance = 0; instance < 8; ++instance) {
    // lattice instance: masses r/q so small enumerations stay exact
    const long long q = static_cast<long long>(testing::pick(rng, 2, 3));
    testing::RandomInstance inst = [&] {
      for (;;) {
        const std::size_t k = testing::pick(rng, 2, 3);
        ValuationGrid grid = testing::random_grid(rng, k);
        MarketVector aggregate = zero_market(k);
        for (std::size_t j = 0; j < k; ++j) {
          aggregate.masses[j] =
              rat(static_cast<long long>(testing::pick(rng, 1, 4)), q);
        }
        try {
          AggregateStats stats = aggregate_stats(grid, aggregate);
          return testing::RandomInstance{std::move(grid),
                                         std::move(aggregate),
                                         std::move(stats)};
        } catch (const NonUniqueOptimumError&) {
        } catch (const DegenerateAssumptionError&) {
        }
      }
    }();
    FrontierConfig config;
    config.denominator = static_cast<std::uint32_t>(q);
    config.max_markets = 3;
    config.cost = rat(0);
    enumerate_grid_segmentations(
        inst.grid, inst.aggregate, config, [&](const Segmentation& s) {
          if (has_profitable_deviation(s, rat(0))) {
            return;
          }
          ++seen_passing;
          Rational top(0);
          bool any = false;
          for (const MarketVector& m : s.markets) {
            if (is_zero_market(m)) {
              continue;
            }
            const Rational p = min_optimal_price(inst.grid, m);
            CHECK(p <= inst.stats.v_star);  // nobody pays above v*
            if (!any || p > top) {
              top = p;
              any = true;
            }
          }
          REQUIRE(any);
          CHECK(top == inst.stats.v_star);
          const WelfareOutcome w = welfare_of(s, min_price_assignment(s));
          CHECK(w.producer_surplus == inst.stats.pi_star);
          CHECK(w.consumer_surplus >= inst.stats.u_star);
          CHECK(w.consumer_surplus <=
                inst.stats.w_bar - inst.stats.pi_star);
          // strategy-proof implies SPE survival under the limit policy
          CHECK(spe_check(s, min_price_assignment(s),
                          OffPathPolicy::kLimitMinPrice)
                    .empty());
        });
  }
  CHECK(seen_passing > 0);
}
