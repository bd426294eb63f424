#include "wextractor/patterns.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "wextractor/errors.hpp"

namespace wextractor {
namespace {

constexpr std::string_view kMeta = "\\^$.|?*+()[]{}";
constexpr std::string_view kDigitClass = "[0-9]{";

bool starts_with_at(std::string_view s, std::size_t i, std::string_view what) {
  return s.size() >= i + what.size() && s.compare(i, what.size(), what) == 0;
}

// Consumes "[0-9]{a,b}" or "[0-9]{a}" at i; returns the position after '}'.
std::size_t consume_digit_class(std::string_view expr, std::size_t i) {
  auto close = expr.find('}', i + kDigitClass.size());
  if (close == std::string_view::npos) throw PatternLayoutError("unterminated quantifier in " + std::string(expr));
  return close + 1;
}

std::string digit_class(std::size_t lo, std::size_t hi) {
  return "[0-9]{" + std::to_string(lo) + "," + std::to_string(hi) + "}";
}

}  // namespace

std::string escape_regex(std::string_view literal) {
  std::string out;
  out.reserve(literal.size() + 8);
  for (char c : literal) {
    if (kMeta.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

NumericLayout numeric_layout(std::string_view expr) {
  NumericLayout layout;
  std::size_t i = 0;
  bool found = false;
  while (i < expr.size()) {
    if (expr[i] == '\\') {
      if (i + 1 >= expr.size()) throw PatternLayoutError("dangling escape in " + std::string(expr));
      layout.literal_prefix += expr[i + 1];
      i += 2;
      continue;
    }
    if (starts_with_at(expr, i, kDigitClass)) {
      found = true;
      break;
    }
    if (kMeta.find(expr[i]) != std::string_view::npos) {
      throw PatternLayoutError("unexpected regex construct before the numeric region in " + std::string(expr));
    }
    layout.literal_prefix += expr[i];
    ++i;
  }
  if (!found) throw PatternLayoutError("no integer region (capture groups absent) in " + std::string(expr));

  layout.integer_begin = i;
  i = consume_digit_class(expr, i);
  if (starts_with_at(expr, i, "(?:")) {
    int depth = 0;
    for (; i < expr.size(); ++i) {
      if (expr[i] == '\\') {
        ++i;
      } else if (expr[i] == '(') {
        ++depth;
      } else if (expr[i] == ')' && --depth == 0) {
        ++i;
        break;
      }
    }
    if (depth != 0) throw PatternLayoutError("unbalanced group in " + std::string(expr));
    if (i < expr.size() && expr[i] == '{') {
      auto close = expr.find('}', i);
      if (close == std::string_view::npos) throw PatternLayoutError("unterminated quantifier in " + std::string(expr));
      i = close + 1;
    }
  }
  layout.integer_end = i;

  std::size_t sep_len = 0;
  if (i < expr.size() && expr[i] == '\\') {
    sep_len = 2;
  } else if (i < expr.size() && kMeta.find(expr[i]) == std::string_view::npos) {
    sep_len = 1;
  }
  if (sep_len && starts_with_at(expr, i + sep_len, kDigitClass)) {
    layout.decimal_begin = i + sep_len;
    layout.decimal_end = consume_digit_class(expr, i + sep_len);
    i = layout.decimal_end;
  }

  // the remainder must be literal
  for (; i < expr.size(); ++i) {
    if (expr[i] == '\\') {
      ++i;
    } else if (kMeta.find(expr[i]) != std::string_view::npos) {
      throw PatternLayoutError("extra regex construct after the numeric regions in " + std::string(expr));
    }
  }

  try {
    std::regex probe{std::string(expr)};
  } catch (const std::regex_error& e) {
    throw PatternLayoutError("expression does not compile: " + std::string(expr) + ": " + e.what());
  }
  return layout;
}

std::string capturing_expression(std::string_view expr) {
  NumericLayout l = numeric_layout(expr);
  std::string out(expr.substr(0, l.integer_begin));
  out += '(';
  out += expr.substr(l.integer_begin, l.integer_end - l.integer_begin);
  out += ')';
  std::size_t rest = l.integer_end;
  if (l.decimal_begin) {
    out += expr.substr(l.integer_end, *l.decimal_begin - l.integer_end);
    out += '(';
    out += expr.substr(*l.decimal_begin, l.decimal_end - *l.decimal_begin);
    out += ')';
    rest = l.decimal_end;
  }
  out += expr.substr(rest);
  return out;
}

std::string pattern_anchor(std::string_view pre) {
  // boundaries: start of tag, of each attribute name, of each attribute value
  std::vector<std::size_t> bounds{0};
  std::size_t i = 1;
  while (i < pre.size() && !std::isspace(static_cast<unsigned char>(pre[i])) && pre[i] != '>' && pre[i] != '/') ++i;
  while (i < pre.size()) {
    while (i < pre.size() && std::isspace(static_cast<unsigned char>(pre[i]))) ++i;
    if (i >= pre.size() || pre[i] == '>') break;
    if (pre[i] == '/') {
      ++i;
      continue;
    }
    bounds.push_back(i);
    while (i < pre.size() && !std::isspace(static_cast<unsigned char>(pre[i])) && pre[i] != '=' && pre[i] != '>') ++i;
    while (i < pre.size() && std::isspace(static_cast<unsigned char>(pre[i]))) ++i;
    if (i < pre.size() && pre[i] == '=') {
      ++i;
      while (i < pre.size() && std::isspace(static_cast<unsigned char>(pre[i]))) ++i;
      if (i < pre.size() && (pre[i] == '"' || pre[i] == '\'')) {
        char q = pre[i];
        bounds.push_back(i + 1);
        auto close = pre.find(q, i + 1);
        i = close == std::string_view::npos ? pre.size() : close + 1;
      } else {
        bounds.push_back(i);
        while (i < pre.size() && !std::isspace(static_cast<unsigned char>(pre[i])) && pre[i] != '>') ++i;
      }
    }
  }

  for (auto it = bounds.rbegin(); it != bounds.rend(); ++it) {
    std::size_t len = pre.size() - *it;
    if (len >= kAnchorMin && len <= kAnchorMax) return std::string(pre.substr(*it));
  }
  for (auto it = bounds.rbegin(); it != bounds.rend(); ++it) {
    if (pre.size() - *it >= kAnchorMin) return std::string(pre.substr(*it));
  }
  return std::string(pre);
}

PointingPattern extract_pointing_pattern(const Fragment& f, std::string_view source_url, Timestamp created_at) {
  if (f.deleted()) throw SynthesisError("fragment was discarded by " + *f.deleted_by);
  NumberParts parts;
  try {
    parts = parse_number_parts(f.value_text);
  } catch (const ParseError& e) {
    throw SynthesisError(std::string("fragment has no parseable value: ") + e.what());
  }
  if (f.value_offset < f.offset || f.value_offset + f.value_text.size() > f.end_offset()) {
    throw SynthesisError("value lies outside the fragment");
  }

  const std::size_t d = parts.integer_digits.size();
  std::string integer;
  if (!parts.thousands_separator) {
    integer = digit_class(std::max<std::size_t>(1, d - 1), d);
  } else {
    const std::size_t h = parts.head_digits.size();
    const auto groups = static_cast<std::size_t>(parts.thousands_groups);
    if (h == 0 || h > 3 || d != h + 3 * groups) {
      throw SynthesisError("irregular digit grouping in \"" + f.value_text + "\"");
    }
    integer = digit_class(h - 1, h) + "(?:" + escape_regex(std::string(1, *parts.thousands_separator)) +
              "?[0-9]{3}){" + std::to_string(groups) + "}";
  }
  std::string decimal;
  if (parts.decimal_separator) {
    decimal = escape_regex(std::string(1, *parts.decimal_separator)) +
              digit_class(1, std::max<std::size_t>(2, parts.fraction_digits.size()));
  }

  const std::string_view raw = f.raw;
  const std::size_t pre_end = f.pre.size();
  const std::size_t value_begin = f.value_offset - f.offset;
  const std::size_t value_end = value_begin + f.value_text.size();
  const std::size_t clue_begin = f.clue_offset - f.offset;
  const std::size_t clue_end = clue_begin + f.clue_text.size();

  std::string prefix;
  if (value_begin >= pre_end) {
    std::string_view gap = raw.substr(pre_end, value_begin - pre_end);
    if (gap.size() <= kMaxLiteralGap) {
      prefix = pattern_anchor(f.pre) + std::string(gap);
    } else if (clue_begin >= pre_end && clue_end <= value_begin && value_begin - clue_begin <= kMaxLiteralGap) {
      prefix = std::string(raw.substr(clue_begin, value_begin - clue_begin));
    } else {
      prefix = std::string(gap.substr(gap.size() - kAnchorMax));
    }
  }
  std::string suffix;
  if (clue_begin >= value_end && clue_end - value_end <= kMaxLiteralGap) {
    suffix = std::string(raw.substr(value_end, clue_end - value_end));
  }

  PointingPattern pp;
  pp.expression = escape_regex(prefix) + integer + decimal + escape_regex(suffix);
  pp.currency_code = f.clue.currency_code;
  pp.created_at = created_at;
  pp.source_url = std::string(source_url);
  numeric_layout(pp.expression);  // invariant check
  return pp;
}

std::vector<PatternMatch> find_pattern_matches(std::string_view html, const PointingPattern& pp) {
  NumericLayout layout = numeric_layout(pp.expression);
  const std::regex re(pp.expression);
  std::vector<PatternMatch> out;
  const char* const base = html.data();
  const char* const end = html.data() + html.size();
  std::cmatch m;

  if (layout.literal_prefix.empty()) {
    const char* cur = base;
    while (cur <= end && std::regex_search(cur, end, m, re)) {
      auto off = static_cast<std::size_t>(m[0].first - base);
      out.push_back({off, m.str(0)});
      cur = m[0].second == m[0].first ? m[0].second + 1 : m[0].second;
    }
    return out;
  }

  std::size_t from = 0;
  while (true) {
    auto pos = html.find(layout.literal_prefix, from);
    if (pos == std::string_view::npos) break;
    if (std::regex_search(base + pos, end, m, re, std::regex_constants::match_continuous)) {
      out.push_back({pos, m.str(0)});
      from = pos + std::max<std::size_t>(1, static_cast<std::size_t>(m.length(0)));
    } else {
      from = pos + 1;
    }
  }
  return out;
}

std::vector<std::string> match_pattern(std::string_view html, const PointingPattern& pp) {
  std::vector<std::string> out;
  for (auto& m : find_pattern_matches(html, pp)) out.push_back(std::move(m.text));
  return out;
}

PriceValue extract_value_from_match(std::string_view matched, const PointingPattern& pp) {
  const std::regex re(capturing_expression(pp.expression));
  std::cmatch m;
  if (!std::regex_match(matched.data(), matched.data() + matched.size(), m, re) || !m[1].matched) {
    throw PatternLayoutError("\"" + std::string(matched) + "\" is not a match of " + pp.expression);
  }
  NumberParts parts;
  for (char c : m.str(1))
    if (c >= '0' && c <= '9') parts.integer_digits += c;
  if (parts.integer_digits.empty()) throw PatternLayoutError("empty integer capture for " + pp.expression);
  if (m.size() > 2 && m[2].matched) parts.fraction_digits = m.str(2);
  return PriceValue::single(parts.amount(), pp.currency_code);
}

}  // namespace wextractor
