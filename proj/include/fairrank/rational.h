// Copyright 2026 The Authors.
//
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

#ifndef FAIRRANK_RATIONAL_H_
#define FAIRRANK_RATIONAL_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Under C++20 the reversed-operand rewrite makes Boost's templated
// integer == rational overload call itself. Exact non-template overloads
// take precedence and compare through rational == rational.
namespace boost {
#define FAIRRANK_RATIONAL_EQ(Int)                                          \
  inline bool operator==(const rational<std::int64_t>& a, Int b) {        \
    return a == rational<std::int64_t>(static_cast<std::int64_t>(b));     \
  }                                                                        \
  inline bool operator==(Int b, const rational<std::int64_t>& a) {        \
    return a == rational<std::int64_t>(static_cast<std::int64_t>(b));     \
  }
FAIRRANK_RATIONAL_EQ(int)
FAIRRANK_RATIONAL_EQ(long)
FAIRRANK_RATIONAL_EQ(long long)
#undef FAIRRANK_RATIONAL_EQ
}  // namespace boost

namespace fairrank {

// Exact rational used for every constraint threshold. Floors and ceilings of
// products such as 0.15 * 20 are computed without rounding.
using Rational = boost::rational<std::int64_t>;

std::int64_t Floor(const Rational& r);
std::int64_t Ceil(const Rational& r);

inline bool IsIntegral(const Rational& r) { return r.denominator() == 1; }

inline double ToDouble(const Rational& r) {
  return boost::rational_cast<double>(r);
}

// Parses "3", "-2", "0.15" or "3/20". Decimal literals convert exactly
// (0.15 -> 3/20). Exponent notation is rejected.
Rational ParseRational(std::string_view text);

// "3/20" style; integers print without a denominator.
std::string ToString(const Rational& r);

}  // namespace fairrank

#endif  // FAIRRANK_RATIONAL_H_
