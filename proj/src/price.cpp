#include "wextractor/price.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "wextractor/errors.hpp"

namespace wextractor {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::int64_t digits_to_int(std::string_view digits) {
  std::int64_t v = 0;
  for (char c : digits) {
    if (v > (INT64_MAX - 9) / 10) throw ParseError("amount out of range: " + std::string(digits));
    v = v * 10 + (c - '0');
  }
  return v;
}

// First run of digits with single '.' or ',' between digit groups.
std::string_view first_numeric_token(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && !is_digit(text[i])) ++i;
  if (i == text.size()) return {};
  std::size_t begin = i;
  std::size_t end = i;
  while (end < text.size()) {
    if (is_digit(text[end])) {
      ++end;
    } else if ((text[end] == '.' || text[end] == ',') && end + 1 < text.size() &&
               is_digit(text[end + 1])) {
      ++end;
    } else {
      break;
    }
  }
  return text.substr(begin, end - begin);
}

}  // namespace

Money Money::from_decimal(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ParseError("empty amount");
  auto dot = s.find('.');
  std::string_view whole = std::string_view(s).substr(0, dot);
  std::string_view frac = dot == std::string::npos ? std::string_view{} : std::string_view(s).substr(dot + 1);
  if (whole.empty() && frac.empty()) throw ParseError("not an amount: " + s);
  for (char c : whole)
    if (!is_digit(c)) throw ParseError("not an amount: " + s);
  for (char c : frac)
    if (!is_digit(c)) throw ParseError("not an amount: " + s);
  NumberParts parts;
  parts.integer_digits = whole.empty() ? "0" : std::string(whole);
  parts.fraction_digits = std::string(frac);
  return parts.amount();
}

std::string Money::str() const {
  std::int64_t abs = cents_ < 0 ? -cents_ : cents_;
  std::string frac = std::to_string(abs % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (cents_ < 0 ? "-" : "") + std::to_string(abs / 100) + "." + frac;
}

Money NumberParts::amount() const {
  std::int64_t whole = digits_to_int(integer_digits);
  std::int64_t cents = 0;
  if (!fraction_digits.empty()) {
    std::string f = fraction_digits;
    if (f.size() == 1) f += '0';
    cents = digits_to_int(f.substr(0, 2));
    // half-up on the third fractional digit
    if (f.size() > 2 && f[2] >= '5') ++cents;
  }
  return Money::from_cents(whole * 100 + cents);
}

NumberParts parse_number_parts(std::string_view text) {
  std::string_view token = first_numeric_token(text);
  if (token.empty()) throw ParseError("no number in \"" + std::string(text) + "\"");

  auto last_dot = token.rfind('.');
  auto last_comma = token.rfind(',');
  std::optional<char> decimal;
  std::optional<char> thousands;

  if (last_dot != std::string_view::npos && last_comma != std::string_view::npos) {
    decimal = last_dot > last_comma ? '.' : ',';
    thousands = *decimal == '.' ? ',' : '.';
  } else if (last_dot != std::string_view::npos || last_comma != std::string_view::npos) {
    char sep = last_dot != std::string_view::npos ? '.' : ',';
    auto count = std::count(token.begin(), token.end(), sep);
    std::size_t trailing = token.size() - token.rfind(sep) - 1;
    if (count == 1 && trailing >= 1 && trailing <= 2) {
      decimal = sep;
    } else {
      thousands = sep;
    }
  }

  NumberParts parts;
  parts.decimal_separator = decimal;
  std::string_view int_part = token;
  if (decimal) {
    auto pos = token.rfind(*decimal);
    int_part = token.substr(0, pos);
    parts.fraction_digits = std::string(token.substr(pos + 1));
  }
  bool seen_sep = false;
  for (char c : int_part) {
    if (is_digit(c)) {
      parts.integer_digits += c;
      if (!seen_sep) parts.head_digits += c;
    } else if (thousands && c == *thousands) {
      seen_sep = true;
      ++parts.thousands_groups;
    } else {
      throw ParseError("ambiguous separators in \"" + std::string(token) + "\"");
    }
  }
  if (parts.thousands_groups > 0) parts.thousands_separator = thousands;
  return parts;
}

Money parse_value(std::string_view text) { return parse_number_parts(text).amount(); }

PriceValue PriceValue::single(Money amount, std::string currency) {
  return PriceValue{amount, std::move(currency), std::nullopt};
}

PriceValue PriceValue::between(Money low, Money high, std::string currency) {
  if (high < low) std::swap(low, high);
  return PriceValue{low, std::move(currency), std::make_pair(low, high)};
}

std::string PriceValue::str() const {
  if (range) return range->first.str() + "-" + range->second.str() + " " + currency_code;
  return amount.str() + " " + currency_code;
}

}  // namespace wextractor
