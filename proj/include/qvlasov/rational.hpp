// Copyright 2026 The qvlasov Authors
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

#pragma once

#include <boost/rational.hpp>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

// Boost 1.74 defines rational-vs-integer equality as a pair of templates
// that call each other. Under C++20's reversed-operator rewriting they
// resolve to themselves and recurse until the stack overflows. Exact-match
// non-template overloads win overload resolution and break the cycle.
namespace boost {

#define QVLASOV_RATIONAL_INTEGER_EQUALITY(Integer)                                      \
  inline bool operator==(const rational<std::int64_t>& a, Integer b) {                \
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);      \
  }                                                                                    \
  inline bool operator==(Integer b, const rational<std::int64_t>& a) { return a == b; } \
  inline bool operator!=(const rational<std::int64_t>& a, Integer b) { return !(a == b); } \
  inline bool operator!=(Integer b, const rational<std::int64_t>& a) { return !(a == b); }

QVLASOV_RATIONAL_INTEGER_EQUALITY(int)
QVLASOV_RATIONAL_INTEGER_EQUALITY(long)
QVLASOV_RATIONAL_INTEGER_EQUALITY(long long)

#undef QVLASOV_RATIONAL_INTEGER_EQUALITY

}  // namespace boost

namespace qvlasov {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace detail {

inline std::int64_t parse_int(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) +
                                "'");
  }
  std::int64_t value = 0;
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) +
                                "'");
  }
  for (; pos < text.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw std::invalid_argument("malformed rational '" + std::string(whole) +
                                  "'");
    }
    value = value * 10 + (text[pos] - '0');
  }
  return negative ? -value : value;
}

}  // namespace detail

/// Parses "7", "-3/4" or a finite decimal such as "1.25" into an exact
/// rational. Decimals are read digit by digit, so "0.1" is exactly 1/10.
inline Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = detail::parse_int(text.substr(0, slash), whole);
    const auto den = detail::parse_int(text.substr(slash + 1), whole);
    if (den == 0) {
      throw std::invalid_argument("zero denominator in '" + std::string(whole) +
                                  "'");
    }
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto int_part = text.substr(0, dot);
    const auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 15) {
      throw std::invalid_argument("too many decimals in '" +
                                  std::string(whole) + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const bool negative = !int_part.empty() && int_part[0] == '-';
    std::int64_t ip = 0;
    if (!int_part.empty() && int_part != "-" && int_part != "+") {
      ip = detail::parse_int(int_part, whole);
    }
    const std::int64_t fp =
        frac_part.empty() ? 0 : detail::parse_int(frac_part, whole);
    if (fp < 0) {
      throw std::invalid_argument("malformed rational '" + std::string(whole) +
                                  "'");
    }
    const std::int64_t magnitude = (ip < 0 ? -ip : ip) * scale + fp;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(detail::parse_int(text, whole));
}

}  // namespace qvlasov
