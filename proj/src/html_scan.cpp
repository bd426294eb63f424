#include "wextractor/html_scan.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace wextractor::html {
namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == ':' || c == '_';
}

// Case-insensitive search for `needle` (already lower-case).
std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.empty() || hay.size() < needle.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(hay[i + k])) != needle[k]) {
        ok = false;
        break;
      }
    }
    if (ok) return i;
  }
  return std::string_view::npos;
}

// Position one past the '>' closing a tag that starts at `pos`, honouring
// quoted attribute values. An unbalanced quote falls back to the first '>'.
std::size_t tag_end(std::string_view html, std::size_t pos) {
  char quote = 0;
  for (std::size_t i = pos + 1; i < html.size(); ++i) {
    char c = html[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      // only a quote right after '=' opens a value
      std::size_t k = i;
      while (k > pos && std::isspace(static_cast<unsigned char>(html[k - 1]))) --k;
      if (k > pos && html[k - 1] == '=') quote = c;
    } else if (c == '>') {
      return i + 1;
    }
  }
  if (quote) {
    auto gt = html.find('>', pos);
    if (gt != std::string_view::npos) return gt + 1;
  }
  return html.size();
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_void_element(std::string_view name) {
  static constexpr std::array<std::string_view, 16> kVoid = {
      "area", "base", "br", "col", "embed", "hr", "img", "input",
      "link", "meta", "param", "source", "track", "wbr", "keygen", "command"};
  return std::find(kVoid.begin(), kVoid.end(), name) != kVoid.end();
}

std::vector<Tag> scan_tags(std::string_view html) {
  std::vector<Tag> tags;
  std::size_t i = 0;
  while (i < html.size()) {
    auto lt = html.find('<', i);
    if (lt == std::string_view::npos || lt + 1 >= html.size()) break;
    char next = html[lt + 1];

    if (html.compare(lt, 4, "<!--") == 0) {
      auto close = html.find("-->", lt + 4);
      std::size_t end = close == std::string_view::npos ? html.size() : close + 3;
      tags.push_back({lt, end, TagKind::Markup, {}});
      i = end;
      continue;
    }
    if (next == '!' || next == '?') {
      auto gt = html.find('>', lt);
      std::size_t end = gt == std::string_view::npos ? html.size() : gt + 1;
      tags.push_back({lt, end, TagKind::Markup, {}});
      i = end;
      continue;
    }
    if (next == '/' && lt + 2 < html.size() && is_alpha(html[lt + 2])) {
      std::size_t n = lt + 2;
      while (n < html.size() && is_name_char(html[n])) ++n;
      auto gt = html.find('>', n);
      std::size_t end = gt == std::string_view::npos ? html.size() : gt + 1;
      tags.push_back({lt, end, TagKind::End, to_lower(html.substr(lt + 2, n - lt - 2))});
      i = end;
      continue;
    }
    if (!is_alpha(next)) {
      i = lt + 1;
      continue;
    }

    std::size_t n = lt + 1;
    while (n < html.size() && is_name_char(html[n])) ++n;
    std::string name = to_lower(html.substr(lt + 1, n - lt - 1));
    std::size_t end = tag_end(html, lt);
    bool self_closing = is_void_element(name) || (end >= 2 && html[end - 1] == '>' && html[end - 2] == '/');
    tags.push_back({lt, end, self_closing ? TagKind::SelfClosing : TagKind::Start, name});
    i = end;

    if (!self_closing && (name == "script" || name == "style")) {
      auto close = ifind(html, "</" + name, end);
      i = close == std::string_view::npos ? html.size() : close;
    }
  }
  return tags;
}

std::vector<bool> markup_mask(std::string_view html, const std::vector<Tag>& tags) {
  std::vector<bool> mask(html.size(), false);
  for (const auto& t : tags) std::fill(mask.begin() + t.begin, mask.begin() + t.end, true);
  for (std::size_t i = 0; i < html.size(); ++i) {
    if (html[i] != '&' || mask[i]) continue;
    std::size_t k = i + 1;
    if (k < html.size() && html[k] == '#') ++k;
    std::size_t start = k;
    while (k < html.size() && k - start < 10 && std::isalnum(static_cast<unsigned char>(html[k]))) ++k;
    if (k > start && k < html.size() && html[k] == ';') {
      std::fill(mask.begin() + i, mask.begin() + k + 1, true);
      i = k;
    }
  }
  return mask;
}

std::vector<NumberSpan> numeric_tokens(std::string_view html, const std::vector<bool>& mask,
                                       std::size_t from, std::size_t to) {
  std::vector<NumberSpan> out;
  to = std::min(to, html.size());
  std::size_t i = from;
  while (i < to) {
    if (mask[i] || !is_digit(html[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < to && !mask[end]) {
      if (is_digit(html[end])) {
        ++end;
      } else if ((html[end] == '.' || html[end] == ',') && end + 1 < to && !mask[end + 1] &&
                 is_digit(html[end + 1])) {
        ++end;
      } else {
        break;
      }
    }
    out.push_back({i, end});
    i = end;
  }
  return out;
}

}  // namespace wextractor::html
