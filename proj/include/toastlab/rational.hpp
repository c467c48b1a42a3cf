// Copyright 2026 The Toastlab Authors.
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

#ifndef TOASTLAB_RATIONAL_HPP_
#define TOASTLAB_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "toastlab/error.hpp"

namespace toastlab {

// Exact non-negative-denominator fraction for cardinality ratios and
// thresholds. Comparisons are done in 128-bit arithmetic.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw Error(ErrorCode::kUndefinedRatio, "zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / den; }

  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }

  // Accepts "p/q", integers, and plain decimals such as "0.25".
  static Rational parse(std::string_view text) {
    auto bad = [&] {
      return Error(ErrorCode::kInvalidParameter,
                   "cannot parse rational '" + std::string(text) + "'");
    };
    if (text.empty()) throw bad();
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      return Rational(parse_int(text.substr(0, slash), bad),
                      parse_int(text.substr(slash + 1), bad));
    }
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) return Rational(parse_int(text, bad));
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15) throw bad();
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const bool negative = !whole.empty() && whole.front() == '-';
    const std::int64_t w =
        whole.empty() || whole == "-" ? 0 : parse_int(whole, bad);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac, bad);
    const std::int64_t magnitude = (w < 0 ? -w : w) * scale + f;
    return Rational(negative ? -magnitude : magnitude, scale);
  }

  friend constexpr bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend constexpr auto operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num) * b.den;
    const __int128 rhs = static_cast<__int128>(b.num) * a.den;
    return lhs < rhs ? std::strong_ordering::less
                     : (lhs > rhs ? std::strong_ordering::greater
                                  : std::strong_ordering::equal);
  }

 private:
  template <typename MakeError>
  static std::int64_t parse_int(std::string_view s, MakeError bad) {
    if (s.empty()) throw bad();
    std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (i == s.size()) throw bad();
    std::int64_t value = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw bad();
      value = value * 10 + (s[i] - '0');
    }
    return s.front() == '-' ? -value : value;
  }
};

}  // namespace toastlab

#endif  // TOASTLAB_RATIONAL_HPP_
