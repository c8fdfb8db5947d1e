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

#include "fairrank/rational.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>

#include "fairrank/error.h"

namespace fairrank {

std::int64_t Floor(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::int64_t Ceil(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

namespace {

std::int64_t ParseInteger(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error(ErrorCode::kParseError,
                "not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    throw Error(ErrorCode::kParseError, "empty rational literal");
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t num = ParseInteger(text.substr(0, slash), whole);
    const std::int64_t den = ParseInteger(text.substr(slash + 1), whole);
    if (den == 0) {
      throw Error(ErrorCode::kParseError,
                  "zero denominator: '" + std::string(whole) + "'");
    }
    return Rational(num, den);
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  const auto digits_only = [](std::string_view part) {
    return std::all_of(part.begin(), part.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  if ((int_part.empty() && frac_part.empty()) || !digits_only(int_part) ||
      !digits_only(frac_part)) {
    throw Error(ErrorCode::kParseError,
                "not a rational number: '" + std::string(whole) + "'");
  }
  // 18 fractional digits is the most an int64 denominator can hold.
  if (frac_part.size() > 18) {
    throw Error(ErrorCode::kParseError,
                "too many decimal places: '" + std::string(whole) + "'");
  }
  const std::int64_t ip = int_part.empty() ? 0 : ParseInteger(int_part, whole);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  const std::int64_t fp =
      frac_part.empty() ? 0 : ParseInteger(frac_part, whole);
  if (ip > (std::numeric_limits<std::int64_t>::max() - fp) / den) {
    throw Error(ErrorCode::kParseError,
                "rational literal overflows: '" + std::string(whole) + "'");
  }
  Rational r(ip * den + fp, den);
  return negative ? -r : r;
}

std::string ToString(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace fairrank
