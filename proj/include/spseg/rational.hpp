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

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spseg {

using BigInt = boost::multiprecision::cpp_int;

// Every mass, price, and surplus in this library is an exact rational.
// boost::rational keeps values in lowest terms with a positive denominator,
// so == and < are exact; no floating point appears anywhere in the core.
using Rational = boost::rational<BigInt>;

inline Rational rat(long long num, long long den = 1) {
  // boost::rational<cpp_int> refuses negative denominators instead of
  // normalizing them, so fix the sign first.
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(BigInt(num), BigInt(den));
}

struct RationalParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "p" or "p/q" with an optional leading '-' and q > 0.
// Inputs need not be in lowest terms; the result always is.
inline Rational parse_rational(std::string_view text) {
  const std::string shown(text);
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && text[pos] == '-') {
    negative = true;
    ++pos;
  }
  const auto read_digits = [&text](std::size_t& p) {
    const std::size_t start = p;
    while (p < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[p]))) {
      ++p;
    }
    return std::string(text.substr(start, p - start));
  };
  const std::string num_digits = read_digits(pos);
  if (num_digits.empty()) {
    throw RationalParseError("malformed rational \"" + shown + "\"");
  }
  std::string den_digits = "1";
  if (pos < text.size()) {
    if (text[pos] != '/') {
      throw RationalParseError("malformed rational \"" + shown + "\"");
    }
    ++pos;
    den_digits = read_digits(pos);
    if (den_digits.empty() || pos != text.size()) {
      throw RationalParseError("malformed rational \"" + shown + "\"");
    }
  }
  BigInt num(num_digits);
  const BigInt den(den_digits);
  if (den == 0) {
    throw RationalParseError("zero denominator in \"" + shown + "\"");
  }
  if (negative) {
    num = -num;
  }
  return Rational(num, den);
}

// Canonical string form: "p" for whole values, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  std::string out = r.numerator().str();
  if (r.denominator() != 1) {
    out += '/';
    out += r.denominator().str();
  }
  return out;
}

}  // namespace spseg
