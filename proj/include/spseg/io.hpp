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
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spseg/frontier.hpp"
#include "spseg/model.hpp"
#include "spseg/rational.hpp"

namespace spseg {

struct FileFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MarketInput {
  ValuationGrid grid;
  MarketVector market;
};

namespace detail {

inline nlohmann::json parse_json_document(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FileFormatError(std::string("invalid JSON: ") + e.what());
  }
}

inline Rational rational_field(const nlohmann::json& value,
                               const std::string& where) {
  if (!value.is_string()) {
    throw FileFormatError(where + ": expected a rational string");
  }
  try {
    return parse_rational(value.get<std::string>());
  } catch (const RationalParseError& e) {
    throw FileFormatError(where + ": " + e.what());
  }
}

inline std::vector<Rational> rational_array(const nlohmann::json& value,
                                            const std::string& where) {
  if (!value.is_array()) {
    throw FileFormatError(where + ": expected an array of rational strings");
  }
  std::vector<Rational> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(
        rational_field(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline ValuationGrid grid_from(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("values")) {
    throw FileFormatError("missing required field \"values\"");
  }
  try {
    return ValuationGrid(rational_array(doc["values"], "values"));
  } catch (const GridError& e) {
    throw FileFormatError(std::string("values: ") + e.what());
  }
}

inline void check_masses(const std::vector<Rational>& masses,
                         std::size_t expected, const std::string& where) {
  if (masses.size() != expected) {
    throw FileFormatError(where + " has " + std::to_string(masses.size()) +
                          " entries but values has " +
                          std::to_string(expected));
  }
  for (std::size_t j = 0; j < masses.size(); ++j) {
    if (masses[j] < Rational(0)) {
      throw FileFormatError(where + "[" + std::to_string(j) +
                            "]: negative mass " + to_string(masses[j]));
    }
  }
}

inline std::string join_rationals(const std::vector<Rational>& xs,
                                  const char* separator) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) {
      out += separator;
    }
    out += to_string(xs[i]);
  }
  return out;
}

inline std::string quoted_list(const std::vector<Rational>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += '"' + to_string(xs[i]) + '"';
  }
  out += ']';
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileFormatError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

// Market file schema: {"values": ["1", "2", ...], "masses": ["1/3", ...]}.
// Masses must be nonnegative with a positive sum.
inline MarketInput parse_market_json(const std::string& text) {
  const nlohmann::json doc = detail::parse_json_document(text);
  ValuationGrid grid = detail::grid_from(doc);
  if (!doc.contains("masses")) {
    throw FileFormatError("missing required field \"masses\"");
  }
  std::vector<Rational> masses =
      detail::rational_array(doc["masses"], "masses");
  detail::check_masses(masses, grid.size(), "masses");
  MarketVector market{std::move(masses)};
  if (total_mass(market) <= Rational(0)) {
    throw FileFormatError("masses: total mass must be positive");
  }
  return MarketInput{std::move(grid), std::move(market)};
}

// Segmentation file schema:
// {"values": [...], "markets": [["1/3", ...], ...]}. Explicit zero markets
// may be omitted; loading pads to at least K markets. The aggregate is
// implied by the componentwise sum.
inline Segmentation parse_segmentation_json(const std::string& text) {
  const nlohmann::json doc = detail::parse_json_document(text);
  ValuationGrid grid = detail::grid_from(doc);
  if (!doc.contains("markets")) {
    throw FileFormatError("missing required field \"markets\"");
  }
  const nlohmann::json& rows = doc["markets"];
  if (!rows.is_array()) {
    throw FileFormatError("markets: expected an array of mass vectors");
  }
  std::vector<MarketVector> markets;
  markets.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "markets[" + std::to_string(i) + "]";
    std::vector<Rational> masses = detail::rational_array(rows[i], where);
    detail::check_masses(masses, grid.size(), where);
    markets.push_back(MarketVector{std::move(masses)});
  }
  while (markets.size() < grid.size()) {
    markets.push_back(zero_market(grid.size()));
  }
  return Segmentation{std::move(grid), std::move(markets)};
}

inline MarketInput load_market_file(const std::string& path) {
  return parse_market_json(detail::read_file(path));
}

inline Segmentation load_segmentation_file(const std::string& path) {
  return parse_segmentation_json(detail::read_file(path));
}

inline std::string emit_market_json(const ValuationGrid& grid,
                                    const MarketVector& market) {
  validate_market(grid, market);
  std::string out = "{\n";
  out += "  \"values\": " + detail::quoted_list(grid.values()) + ",\n";
  out += "  \"masses\": " + detail::quoted_list(market.masses) + "\n";
  out += "}\n";
  return out;
}

inline std::string emit_segmentation_json(const Segmentation& s) {
  std::string out = "{\n";
  out += "  \"values\": " + detail::quoted_list(s.grid.values()) + ",\n";
  out += "  \"markets\": [\n";
  for (std::size_t i = 0; i < s.markets.size(); ++i) {
    out += "    " + detail::quoted_list(s.markets[i].masses);
    out += i + 1 < s.markets.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

// Compact one-cell encoding of a segmentation: masses joined by ';' within a
// market, markets joined by '|'. Keeps the CSV free of quoting.
inline std::string encode_segmentation(const Segmentation& s) {
  std::string out;
  for (std::size_t i = 0; i < s.markets.size(); ++i) {
    if (i > 0) {
      out += '|';
    }
    out += detail::join_rationals(s.markets[i].masses, ";");
  }
  return out;
}

// CSV with columns pi,u,representative; rows arrive sorted by (pi, u).
inline std::string frontier_csv(const std::vector<FrontierPoint>& points) {
  std::string out = "pi,u,representative\n";
  for (const FrontierPoint& p : points) {
    out += to_string(p.pi) + "," + to_string(p.u) + "," +
           encode_segmentation(p.representative) + "\n";
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw FileFormatError("cannot write " + path);
  }
  out << bytes;
}

}  // namespace spseg
