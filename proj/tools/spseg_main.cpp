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

// Command-line front end. Subcommands:
//   analyze    uniform-monopoly statistics and surplus-triangle vertices
//   greedy     extremal greedy split of an aggregate market
//   construct  family member hitting a target consumer surplus exactly
//   verify     strategy-proofness / SPE-survival check of a segmentation
//   frontier   enumerate and sample achievable surplus pairs
//
// Exit codes: 0 success (verify: pass), 1 verify fail, 2 input error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spseg/spseg.hpp"

namespace {

using nlohmann::ordered_json;
using namespace spseg;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInputError = 2;

std::string market_label(std::size_t index) {
  return "X" + std::to_string(index + 1);
}

std::string value_label(std::size_t index) {
  return "v" + std::to_string(index + 1);
}

Rational parse_cli_rational(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const RationalParseError& e) {
    throw FileFormatError(std::string(flag) + ": " + e.what());
  }
}

ordered_json point_json(const SurplusPoint& p) {
  return ordered_json{{"pi", to_string(p.pi)}, {"u", to_string(p.u)}};
}

ordered_json segmentation_json(const Segmentation& s) {
  ordered_json values = ordered_json::array();
  for (const Rational& v : s.grid.values()) {
    values.push_back(to_string(v));
  }
  ordered_json markets = ordered_json::array();
  for (const MarketVector& m : s.markets) {
    ordered_json row = ordered_json::array();
    for (const Rational& x : m.masses) {
      row.push_back(to_string(x));
    }
    markets.push_back(row);
  }
  return ordered_json{{"values", values}, {"markets", markets}};
}

ordered_json witness_json(const DeviationWitness& w) {
  return ordered_json{{"source", w.source_market + 1},
                      {"value_index", w.valuation_index + 1},
                      {"target", w.target_market + 1},
                      {"gain", to_string(w.gain)}};
}

void print_markets_text(const Segmentation& s,
                        const PriceAssignment& prices) {
  for (std::size_t i = 0; i < s.markets.size(); ++i) {
    std::cout << "market " << i + 1 << ": ";
    for (std::size_t j = 0; j < s.grid.size(); ++j) {
      if (j > 0) {
        std::cout << ' ';
      }
      std::cout << to_string(s.markets[i].masses[j]);
    }
    std::cout << "  (price " << to_string(prices[i]) << ")\n";
  }
}

int cmd_analyze(const std::string& path, const std::string& format) {
  const MarketInput input = load_market_file(path);
  const AggregateStats stats = aggregate_stats(input.grid, input.market);
  if (format == "json") {
    ordered_json doc{{"v_star", to_string(stats.v_star)},
                     {"pi_star", to_string(stats.pi_star)},
                     {"u_star", to_string(stats.u_star)},
                     {"w_bar", to_string(stats.w_bar)},
                     {"triangle",
                      ordered_json{{"A", point_json(stats.a)},
                                   {"B", point_json(stats.b)},
                                   {"C", point_json(stats.c)},
                                   {"D", point_json(stats.d)}}}};
    std::cout << doc.dump(2) << "\n";
    return kExitPass;
  }
  const auto line = [](const char* name, const SurplusPoint& p,
                       const char* note) {
    std::cout << name << " = (" << to_string(p.pi) << ", " << to_string(p.u)
              << ")  " << note << "\n";
  };
  std::cout << "v*   = " << to_string(stats.v_star) << "\n"
            << "pi*  = " << to_string(stats.pi_star) << "\n"
            << "u*   = " << to_string(stats.u_star) << "\n"
            << "wbar = " << to_string(stats.w_bar) << "\n";
  line("A", stats.a, "uniform monopoly");
  line("B", stats.b, "full surplus extraction");
  line("C", stats.c, "buyer-optimal");
  line("D", stats.d, "minimum total surplus");
  return kExitPass;
}

int report_construction(const Segmentation& seg, const ordered_json& extra,
                        const std::vector<Rational>& shares,
                        const std::string& out_path,
                        const std::string& format) {
  const PriceAssignment prices = min_price_assignment(seg);
  const WelfareOutcome welfare = welfare_of(seg, prices);
  const StrategyProofEvidence evidence = is_strategy_proof(seg, Rational(0));
  if (!out_path.empty()) {
    write_file(out_path, emit_segmentation_json(seg));
  }
  if (format == "json") {
    ordered_json doc = extra;
    ordered_json share_list = ordered_json::array();
    for (const Rational& a : shares) {
      share_list.push_back(to_string(a));
    }
    ordered_json price_list = ordered_json::array();
    for (const Rational& p : prices) {
      price_list.push_back(to_string(p));
    }
    doc["segmentation"] = segmentation_json(seg);
    if (!shares.empty()) {
      doc["shares"] = share_list;
    }
    doc["prices"] = price_list;
    doc["welfare"] = ordered_json{
        {"pi", to_string(welfare.producer_surplus)},
        {"u", to_string(welfare.consumer_surplus)},
        {"w", to_string(welfare.total_surplus)}};
    doc["verifier"] =
        ordered_json{{"mode", "strategyproof"},
                     {"cost", "0"},
                     {"pass", evidence.strategy_proof}};
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& [key, value] : extra.items()) {
      std::cout << key << " = " << std::string(value) << "\n";
    }
    if (!shares.empty()) {
      std::cout << "shares =";
      for (const Rational& a : shares) {
        std::cout << ' ' << to_string(a);
      }
      std::cout << "\n";
    }
    print_markets_text(seg, prices);
    std::cout << "pi = " << to_string(welfare.producer_surplus) << "\n"
              << "u  = " << to_string(welfare.consumer_surplus) << "\n"
              << "verifier: "
              << (evidence.strategy_proof ? "pass" : "FAIL")
              << " (strategy-proof at cost 0)\n";
    if (!out_path.empty()) {
      std::cout << "wrote " << out_path << "\n";
    }
  }
  return evidence.strategy_proof ? kExitPass : kExitFail;
}

int cmd_greedy(const std::string& path, const std::string& out_path,
               const std::string& format) {
  const MarketInput input = load_market_file(path);
  const GreedyResult greedy = greedy_segmentation(input.grid, input.market);
  const ordered_json extra{{"rounds", std::to_string(greedy.rounds())}};
  return report_construction(as_segmentation(greedy), extra, greedy.shares,
                             out_path, format);
}

int cmd_construct(const std::string& path, const std::string& target_text,
                  const std::string& out_path, const std::string& format) {
  const MarketInput input = load_market_file(path);
  const Rational target = parse_cli_rational(target_text, "--target-u");
  const GreedyResult greedy = greedy_segmentation(input.grid, input.market);
  const TargetSolution solution = solve_target_u(greedy, target);
  const ordered_json extra{{"k", std::to_string(solution.params.k)},
                           {"alpha", to_string(solution.params.alpha)},
                           {"psi", to_string(solution.params.psi)}};
  return report_construction(solution.segmentation, extra, {}, out_path,
                             format);
}

int cmd_verify(const std::string& path, const std::string& cost_text,
               const std::string& mode, const std::string& format) {
  const Segmentation seg = load_segmentation_file(path);
  VerifierConfig config;
  config.cost = parse_cli_rational(cost_text, "--cost");
  if (config.cost < Rational(0)) {
    throw FileFormatError("--cost: must be nonnegative");
  }
  if (mode == "strategyproof") {
    config.mode = VerifierMode::kStrategyProof;
  } else {
    config.mode = VerifierMode::kSubgamePerfect;
    config.off_path_policy = mode == "spe-limitmin"
                                 ? OffPathPolicy::kLimitMinPrice
                                 : OffPathPolicy::kMaxOptimalPrice;
  }
  const VerifierReport report = run_verifier(seg, config);
  if (format == "json") {
    ordered_json witnesses = ordered_json::array();
    for (const DeviationWitness& w : report.witnesses) {
      witnesses.push_back(witness_json(w));
    }
    ordered_json doc{{"mode", mode},
                     {"cost", to_string(config.cost)},
                     {"pass", report.pass},
                     {"witnesses", witnesses}};
    if (config.mode == VerifierMode::kStrategyProof) {
      ordered_json violations = ordered_json::array();
      for (const IndifferenceViolation& v : report.indifference_violations) {
        violations.push_back(
            ordered_json{{"low", v.low_market + 1},
                         {"high", v.high_market + 1},
                         {"value_index", v.valuation_index + 1}});
      }
      doc["indifference_violations"] = violations;
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "mode = " << mode << "\n"
              << "cost = " << to_string(config.cost) << "\n"
              << "verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
    for (const DeviationWitness& w : report.witnesses) {
      std::cout << "witness: source=" << market_label(w.source_market)
                << " value=" << value_label(w.valuation_index)
                << " target=" << market_label(w.target_market)
                << " gain=" << to_string(w.gain) << "\n";
    }
    if (config.mode == VerifierMode::kStrategyProof) {
      if (report.indifference_violations.empty()) {
        std::cout << "indifference: holds\n";
      }
      for (const IndifferenceViolation& v : report.indifference_violations) {
        std::cout << "indifference: violation low="
                  << market_label(v.low_market)
                  << " high=" << market_label(v.high_market)
                  << " value=" << value_label(v.valuation_index) << "\n";
      }
    }
  }
  return report.pass ? kExitPass : kExitFail;
}

int cmd_frontier(const std::string& path, const std::string& cost_text,
                 std::uint32_t denominator, std::size_t max_markets,
                 const std::string& out_path, const std::string& plot_path,
                 const std::string& format) {
  const MarketInput input = load_market_file(path);
  FrontierConfig config;
  config.denominator = denominator;
  config.max_markets = max_markets;
  config.cost = parse_cli_rational(cost_text, "--cost");
  if (config.cost < Rational(0)) {
    throw FileFormatError("--cost: must be nonnegative");
  }
  const FrontierSample sample =
      sp_region_sample_report(input.grid, input.market, config);
  const std::vector<FrontierPoint>& points = sample.points;
  const std::string csv = frontier_csv(points);
  if (!out_path.empty()) {
    write_file(out_path, csv);
  }
  if (!plot_path.empty()) {
    const AggregateStats stats = aggregate_stats(input.grid, input.market);
    write_file(plot_path, frontier_svg(stats, points));
  }
  if (format == "json") {
    ordered_json point_list = ordered_json::array();
    for (const FrontierPoint& p : points) {
      point_list.push_back(
          ordered_json{{"pi", to_string(p.pi)},
                       {"u", to_string(p.u)},
                       {"representative", encode_segmentation(p.representative)}});
    }
    ordered_json doc{{"enumerated", sample.enumerated},
                     {"passing", sample.passing},
                     {"points", point_list}};
    std::cout << doc.dump(2) << "\n";
  } else if (!out_path.empty()) {
    std::cout << "enumerated = " << sample.enumerated << "\n"
              << "passing    = " << sample.passing << "\n"
              << "points     = " << points.size() << "\n"
              << "wrote " << out_path << "\n";
    if (!plot_path.empty()) {
      std::cout << "wrote " << plot_path << "\n";
    }
  } else {
    std::cout << csv;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact strategy-proof market segmentation toolkit"};
  app.require_subcommand(1);

  std::string market_path;
  std::string seg_path;
  std::string out_path;
  std::string plot_path;
  std::string format = "text";
  std::string cost = "0";
  std::string target_u;
  std::string mode = "strategyproof";
  std::uint32_t denominator = 1;
  std::size_t max_markets = 1;

  const auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* analyze =
      app.add_subcommand("analyze", "uniform-monopoly statistics");
  analyze->add_option("market", market_path, "market file")->required();
  add_format(analyze);

  CLI::App* greedy = app.add_subcommand("greedy", "extremal greedy split");
  greedy->add_option("market", market_path, "market file")->required();
  greedy->add_option("--out", out_path, "write the segmentation here");
  add_format(greedy);

  CLI::App* construct =
      app.add_subcommand("construct", "hit a target consumer surplus");
  construct->add_option("market", market_path, "market file")->required();
  construct->add_option("--target-u", target_u, "target consumer surplus")
      ->required();
  construct->add_option("--out", out_path, "write the segmentation here");
  add_format(construct);

  CLI::App* verify = app.add_subcommand("verify", "check a segmentation");
  verify->add_option("segmentation", seg_path, "segmentation file")
      ->required();
  verify->add_option("--cost", cost, "deviation cost (rational)");
  verify->add_option("--mode", mode, "verification mode")
      ->check(CLI::IsMember({"strategyproof", "spe-limitmin", "spe-maxprice"}));
  add_format(verify);

  CLI::App* frontier =
      app.add_subcommand("frontier", "sample achievable surplus pairs");
  frontier->add_option("market", market_path, "market file")->required();
  frontier->add_option("--cost", cost, "deviation cost (rational)");
  frontier->add_option("--denominator", denominator, "mass quantum 1/q")
      ->check(CLI::PositiveNumber);
  frontier->add_option("--max-markets", max_markets, "number of market slots")
      ->check(CLI::PositiveNumber);
  frontier->add_option("--out", out_path, "write CSV here");
  frontier->add_option("--plot", plot_path, "write SVG here");
  add_format(frontier);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  try {
    if (*analyze) {
      return cmd_analyze(market_path, format);
    }
    if (*greedy) {
      return cmd_greedy(market_path, out_path, format);
    }
    if (*construct) {
      return cmd_construct(market_path, target_u, out_path, format);
    }
    if (*verify) {
      return cmd_verify(seg_path, cost, mode, format);
    }
    if (*frontier) {
      return cmd_frontier(market_path, cost, denominator, max_markets,
                          out_path, plot_path, format);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
