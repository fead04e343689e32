#include "augscout/percent.hpp"

#include <cctype>
#include <cstdlib>

#include "augscout/errors.hpp"

namespace augscout {

Percent Percent::parse(std::string_view text) {
  if (text.empty()) raise(ErrorCode::InvalidSpec, "empty percent value");
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-') {
    negative = true;
    i = 1;
  } else if (text[0] == '+') {
    i = 1;
  }
  std::int64_t whole = 0;
  bool any_digit = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    whole = whole * 10 + (text[i] - '0');
    any_digit = true;
    if (whole > 1'000'000) raise(ErrorCode::InvalidSpec, "percent value out of range: " + std::string(text));
  }
  std::int64_t frac = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    int digits = 0;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      if (++digits > 3) {
        raise(ErrorCode::InvalidSpec,
              "percent supports at most three decimal places: " + std::string(text));
      }
      frac = frac * 10 + (text[i] - '0');
      any_digit = true;
    }
    while (digits < 3) {
      frac *= 10;
      ++digits;
    }
  }
  if (!any_digit || i != text.size()) {
    raise(ErrorCode::InvalidSpec, "malformed percent value: " + std::string(text));
  }
  std::int64_t milli = whole * kScale + frac;
  return Percent(negative ? -milli : milli);
}

std::string Percent::str() const {
  std::int64_t m = milli_;
  std::string sign;
  if (m < 0) {
    sign = "-";
    m = -m;
  }
  std::string out = sign + std::to_string(m / kScale);
  std::int64_t frac = m % kScale;
  if (frac != 0) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%03lld", static_cast<long long>(frac));
    std::string f(buf);
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += "." + f;
  }
  return out;
}

}  // namespace augscout
