#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace gerbe {

using Rational = boost::rational<std::int64_t>;

/// Parses "p/q", "p" or a terminating decimal such as "0.25".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

std::int64_t floor(const Rational& r);
std::int64_t ceil(const Rational& r);

}  // namespace gerbe
