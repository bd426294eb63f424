#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wextractor/fragmenter.hpp"
#include "wextractor/price.hpp"
#include "wextractor/timestamp.hpp"

namespace wextractor {

/// A regular expression that points at the price inside a page, e.g.
/// `Wprice">&euro;[0-9]{2,3}\.[0-9]{1,2}`.
struct PointingPattern {
  std::string expression;
  std::string currency_code;
  Timestamp created_at{};
  std::string source_url;

  bool operator==(const PointingPattern&) const = default;
};

/// Where the numeric regions sit inside an expression.
struct NumericLayout {
  std::size_t integer_begin = 0;
  std::size_t integer_end = 0;
  std::optional<std::size_t> decimal_begin;  // start of the decimal digit class
  std::size_t decimal_end = 0;

  /// Expression text preceding the integer region, with escapes removed.
  std::string literal_prefix;
};

/// Locates the integer and optional decimal regions. Throws PatternLayoutError
/// when the expression does not have exactly one integer region and at most
/// one decimal region, or does not compile.
NumericLayout numeric_layout(std::string_view expression);

/// Same expression with both numeric regions wrapped in capture groups.
std::string capturing_expression(std::string_view expression);

/// Backslash-escapes regex metacharacters.
std::string escape_regex(std::string_view literal);

/// Distinctive tail of a start tag: the shortest suffix starting at an
/// attribute boundary that is 6-24 characters long.
std::string pattern_anchor(std::string_view pre);

inline constexpr std::size_t kAnchorMin = 6;
inline constexpr std::size_t kAnchorMax = 24;
/// Longest stretch of text between the start tag and the number that is kept verbatim.
inline constexpr std::size_t kMaxLiteralGap = 48;

/// Builds a pointing pattern from a surviving fragment. Throws SynthesisError
/// when the fragment carries no single parseable amount.
PointingPattern extract_pointing_pattern(const Fragment& fragment, std::string_view source_url = {},
                                         Timestamp created_at = {});

struct PatternMatch {
  std::size_t offset = 0;
  std::string text;
};

/// Non-overlapping matches in document order.
std::vector<PatternMatch> find_pattern_matches(std::string_view html, const PointingPattern& pp);
std::vector<std::string> match_pattern(std::string_view html, const PointingPattern& pp);

/// Amount captured by the numeric regions of `pp` within `matched`.
PriceValue extract_value_from_match(std::string_view matched, const PointingPattern& pp);

}  // namespace wextractor
