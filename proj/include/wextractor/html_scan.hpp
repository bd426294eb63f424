#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace wextractor::html {

enum class TagKind { Start, End, SelfClosing, Markup };

/// One tag-like construct found by a tolerant forward scan. `Markup` covers
/// every `<!...>` and `<?...?>` construct.
struct Tag {
  std::size_t begin = 0;  // offset of '<'
  std::size_t end = 0;    // one past '>'
  TagKind kind = TagKind::Markup;
  std::string name;       // lower-case; empty for Markup
};

bool is_void_element(std::string_view lower_name);

/// Scans `html` left to right. Never fails: unterminated constructs run to the
/// end of input. The bodies of <script> and <style> are treated as raw text.
std::vector<Tag> scan_tags(std::string_view html);

/// Marks offsets that are not visible text: tag and markup interiors plus
/// character references such as "&euro;" or "&#8364;".
std::vector<bool> markup_mask(std::string_view html, const std::vector<Tag>& tags);

/// Span of a numeric token: digit runs joined by single '.' or ','.
struct NumberSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Numeric tokens in [from, to) whose characters are all unmasked.
std::vector<NumberSpan> numeric_tokens(std::string_view html, const std::vector<bool>& mask,
                                       std::size_t from, std::size_t to);

std::string to_lower(std::string_view s);

}  // namespace wextractor::html
