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

#include <string>
#include <vector>

#include "spseg/frontier.hpp"
#include "spseg/pricing.hpp"
#include "spseg/rational.hpp"

namespace spseg {

namespace detail {

// Pixel coordinates are computed in exact rational arithmetic and rounded
// half-up to hundredths, so the emitted bytes never depend on floating point.
inline std::string pixel(const Rational& v) {
  const BigInt scaled_num = v.numerator() * 200 + v.denominator();
  const BigInt scaled_den = v.denominator() * 2;
  BigInt hundredths = scaled_num / scaled_den;
  if (scaled_num < 0 && scaled_num % scaled_den != 0) {
    --hundredths;  // make division floor, not truncate
  }
  const bool negative = hundredths < 0;
  BigInt abs = negative ? BigInt(-hundredths) : hundredths;
  std::string digits = abs.str();
  while (digits.size() < 3) {
    digits.insert(digits.begin(), '0');
  }
  std::string out = negative ? "-" : "";
  out += digits.substr(0, digits.size() - 2);
  out += '.';
  out += digits.substr(digits.size() - 2);
  return out;
}

struct SvgMapper {
  Rational x_lo, x_hi, y_lo, y_hi;

  std::string x(const Rational& world) const {
    return pixel(Rational(80) +
                 (world - x_lo) * Rational(690) / (x_hi - x_lo));
  }
  std::string y(const Rational& world) const {
    return pixel(Rational(550) -
                 (world - y_lo) * Rational(510) / (y_hi - y_lo));
  }
};

inline void svg_point(std::string& out, const SvgMapper& map,
                      const SurplusPoint& p, const char* label) {
  out += "  <circle cx=\"" + map.x(p.pi) + "\" cy=\"" + map.y(p.u) +
         "\" r=\"5\" fill=\"#1f3d7a\"/>\n";
  out += "  <text x=\"" + map.x(p.pi) + "\" y=\"" + map.y(p.u) +
         "\" dx=\"9\" dy=\"-6\" font-size=\"16\" font-family=\"sans-serif\" "
         "fill=\"#1f3d7a\">" +
         label + "</text>\n";
}

}  // namespace detail

// Static 800x600 figure: the surplus triangle B-C-D, the labeled vertices
// A-D, and the sampled (pi, u) points. Byte-identical output for identical
// inputs.
inline std::string frontier_svg(const AggregateStats& stats,
                                const std::vector<FrontierPoint>& points) {
  Rational span = stats.w_bar - stats.pi_star;
  if (span <= Rational(0)) {
    span = Rational(1);
  }
  const Rational pad = span / Rational(10);
  const detail::SvgMapper map{stats.pi_star - pad, stats.w_bar + pad,
                              Rational(0) - pad,
                              stats.w_bar - stats.pi_star + pad};

  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
      "width=\"800\" height=\"600\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" "
         "fill=\"#ffffff\"/>\n";
  out += "  <polygon points=\"" + map.x(stats.b.pi) + "," + map.y(stats.b.u) +
         " " + map.x(stats.c.pi) + "," + map.y(stats.c.u) + " " +
         map.x(stats.d.pi) + "," + map.y(stats.d.u) +
         "\" fill=\"#e8eef9\" stroke=\"#5b79a8\" stroke-width=\"1.5\"/>\n";
  detail::svg_point(out, map, stats.a, "A");
  detail::svg_point(out, map, stats.b, "B");
  detail::svg_point(out, map, stats.c, "C");
  detail::svg_point(out, map, stats.d, "D");
  for (const FrontierPoint& p : points) {
    out += "  <circle cx=\"" + map.x(p.pi) + "\" cy=\"" + map.y(p.u) +
           "\" r=\"3\" fill=\"#b03a2e\"/>\n";
  }
  out += "  <text x=\"425\" y=\"585\" text-anchor=\"middle\" "
         "font-size=\"16\" font-family=\"sans-serif\">producer surplus "
         "&#960;</text>\n";
  out += "  <text x=\"20\" y=\"295\" text-anchor=\"middle\" "
         "font-size=\"16\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 20 295)\">consumer surplus u</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace spseg
