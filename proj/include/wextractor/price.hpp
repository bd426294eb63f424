#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wextractor {

/// Monetary amount held as an integral number of hundredths.
class Money {
 public:
  constexpr Money() = default;
  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }

  /// Parses a plain decimal such as "6000" or "19.95" (dot separator only).
  static Money from_decimal(std::string_view text);

  constexpr std::int64_t cents() const { return cents_; }
  double to_double() const { return static_cast<double>(cents_) / 100.0; }

  /// "142.29"
  std::string str() const;

  constexpr auto operator<=>(const Money&) const = default;

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

/// Lexical breakdown of a numeric token as it appeared on the page.
struct NumberParts {
  std::string integer_digits;   // separators removed
  std::string fraction_digits;  // empty when no decimal part was observed
  std::optional<char> decimal_separator;
  std::optional<char> thousands_separator;
  std::string head_digits;      // digits before the first thousands separator
  int thousands_groups = 0;     // number of thousands separators

  Money amount() const;
};

/// Splits a numeric token using the locale heuristic: when both '.' and ','
/// appear the last one is the decimal separator; a lone separator followed by
/// exactly one or two digits is decimal, otherwise it groups thousands.
/// Throws ParseError when no digits are found.
NumberParts parse_number_parts(std::string_view text);

/// Amount of the first numeric token in `text`, rounded to two fractional digits.
Money parse_value(std::string_view text);

/// A parsed price, possibly a (min, max) pair.
struct PriceValue {
  Money amount;
  std::string currency_code;
  std::optional<std::pair<Money, Money>> range;

  static PriceValue single(Money amount, std::string currency);
  static PriceValue between(Money low, Money high, std::string currency);

  /// "142.29 EUR" or "99.00-149.00 USD"
  std::string str() const;

  bool operator==(const PriceValue&) const = default;
};

}  // namespace wextractor
