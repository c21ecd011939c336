#include "gerbe/rational.hpp"

#include <charconv>

#include "gerbe/errors.hpp"

namespace gerbe {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ArgumentError("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ArgumentError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash), text);
    auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto int_part = text.substr(0, dot);
    auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 15) throw ArgumentError("too many decimals in '" + std::string(text) + "'");
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative || (!int_part.empty() && int_part.front() == '+')) int_part.remove_prefix(1);
    std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t fp = frac_part.empty() ? 0 : parse_int(frac_part, text);
    std::int64_t scale = 1;
    for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
    Rational r(ip * scale + fp, scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, text));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t floor(const Rational& r) {
  auto n = r.numerator();
  auto d = r.denominator();  // always positive
  auto q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

std::int64_t ceil(const Rational& r) { return -floor(-r); }

}  // namespace gerbe
