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

#include "spseg/rational.hpp"

namespace spseg {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The ordered valuation set v_1 < v_2 < ... < v_K, all strictly positive.
class ValuationGrid {
 public:
  explicit ValuationGrid(std::vector<Rational> values)
      : values_(std::move(values)) {
    if (values_.empty()) {
      throw GridError("valuation grid needs at least one value");
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (values_[j] <= Rational(0)) {
        throw GridError("valuation v" + std::to_string(j + 1) +
                        " must be positive");
      }
      if (j > 0 && values_[j - 1] >= values_[j]) {
        throw GridError("valuations must be strictly increasing at v" +
                        std::to_string(j + 1));
      }
    }
  }

  std::size_t size() const { return values_.size(); }
  const Rational& value(std::size_t j) const { return values_.at(j); }
  const std::vector<Rational>& values() const { return values_; }

  friend bool operator==(const ValuationGrid&, const ValuationGrid&) = default;

 private:
  std::vector<Rational> values_;
};

// One market in canonical representation: masses[j] is the mass of consumers
// whose valuation is v_{j+1}. Masses are nonnegative and the vector length
// matches the grid it is used with.
struct MarketVector {
  std::vector<Rational> masses;

  friend bool operator==(const MarketVector&, const MarketVector&) = default;
};

inline MarketVector zero_market(std::size_t k) {
  return MarketVector{std::vector<Rational>(k, Rational(0))};
}

inline void validate_market(const ValuationGrid& grid, const MarketVector& m) {
  if (m.masses.size() != grid.size()) {
    throw GridMismatchError("market has " + std::to_string(m.masses.size()) +
                            " masses but the grid has " +
                            std::to_string(grid.size()) + " values");
  }
  for (std::size_t j = 0; j < m.masses.size(); ++j) {
    if (m.masses[j] < Rational(0)) {
      throw GridMismatchError("negative mass at v" + std::to_string(j + 1));
    }
  }
}

// Indices j with masses[j] > 0, ascending.
inline std::vector<std::size_t> support(const MarketVector& m) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < m.masses.size(); ++j) {
    if (m.masses[j] > Rational(0)) {
      out.push_back(j);
    }
  }
  return out;
}

inline Rational total_mass(const MarketVector& m) {
  Rational sum(0);
  for (const Rational& x : m.masses) {
    sum += x;
  }
  return sum;
}

inline bool is_zero_market(const MarketVector& m) {
  for (const Rational& x : m.masses) {
    if (x > Rational(0)) {
      return false;
    }
  }
  return true;
}

inline MarketVector scaled(const MarketVector& m, const Rational& factor) {
  MarketVector out = m;
  for (Rational& x : out.masses) {
    x *= factor;
  }
  return out;
}

inline void add_into(MarketVector& target, const MarketVector& other) {
  if (target.masses.size() != other.masses.size()) {
    throw GridMismatchError("cannot add markets of different lengths");
  }
  for (std::size_t j = 0; j < target.masses.size(); ++j) {
    target.masses[j] += other.masses[j];
  }
}

// A collection of markets over one grid. Empty (all-zero) markets are
// legitimate entries; they act as open slots consumers could move into.
struct Segmentation {
  ValuationGrid grid;
  std::vector<MarketVector> markets;

  MarketVector aggregate() const {
    MarketVector sum = zero_market(grid.size());
    for (const MarketVector& m : markets) {
      add_into(sum, m);
    }
    return sum;
  }

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

struct SegmentationMismatch {
  std::size_t valuation_index;  // first component whose masses do not add up
  Rational stated;
  Rational actual;
};

// Checks that the markets add up componentwise to the stated aggregate.
// Returns the first mismatching component, or nullopt when the split is exact.
inline std::optional<SegmentationMismatch> validate_segmentation(
    const Segmentation& s, const MarketVector& aggregate) {
  validate_market(s.grid, aggregate);
  for (const MarketVector& m : s.markets) {
    validate_market(s.grid, m);
  }
  const MarketVector sum = s.aggregate();
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    if (sum.masses[j] != aggregate.masses[j]) {
      return SegmentationMismatch{j, aggregate.masses[j], sum.masses[j]};
    }
  }
  return std::nullopt;
}

struct WelfareOutcome {
  Rational producer_surplus;
  Rational consumer_surplus;
  Rational total_surplus;  // always producer_surplus + consumer_surplus
};

// Certifies a profitable move: consumers of one valuation leave source_market
// for target_market and strictly gain (net of the deviation cost).
struct DeviationWitness {
  std::size_t source_market;
  std::size_t valuation_index;
  std::size_t target_market;
  Rational gain;

  friend bool operator==(const DeviationWitness&,
                         const DeviationWitness&) = default;
};

}  // namespace spseg
