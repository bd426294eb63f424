#include "wextractor/fragmenter.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "wextractor/errors.hpp"

namespace wextractor {
namespace {

constexpr std::string_view kDefaultClueTable =
    "# literal<TAB>currency_code\n"
    "&euro;\tEUR\n"
    "&#8364;\tEUR\n"
    "&#x20AC;\tEUR\n"
    "\xE2\x82\xAC\tEUR\n"
    "EUR\tEUR\n"
    "$\tUSD\n"
    "USD\tUSD\n"
    "&pound;\tGBP\n"
    "&#163;\tGBP\n"
    "\xC2\xA3\tGBP\n"
    "GBP\tGBP\n";

bool is_ascii_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

using html::Tag;
using html::TagKind;

// Nearest start tag before index `upper` that is still open at that point.
std::optional<std::size_t> open_start_before(const std::vector<Tag>& tags, std::size_t upper) {
  std::unordered_map<std::string, int> pending_ends;
  for (std::size_t j = upper; j-- > 0;) {
    const Tag& t = tags[j];
    if (t.kind == TagKind::End) {
      ++pending_ends[t.name];
    } else if (t.kind == TagKind::Start) {
      auto it = pending_ends.find(t.name);
      if (it != pending_ends.end() && it->second > 0) {
        --it->second;
      } else {
        return j;
      }
    }
  }
  return std::nullopt;
}

// Index of the end tag closing tags[start], or nullopt past kMaxElementSpan.
std::optional<std::size_t> matching_end(const std::vector<Tag>& tags, std::size_t start) {
  const Tag& open = tags[start];
  int depth = 1;
  for (std::size_t k = start + 1; k < tags.size(); ++k) {
    const Tag& t = tags[k];
    if (t.begin - open.begin > kMaxElementSpan) break;
    if (t.name != open.name) continue;
    if (t.kind == TagKind::Start) {
      ++depth;
    } else if (t.kind == TagKind::End && --depth == 0) {
      if (t.end - open.begin <= kMaxElementSpan) return k;
      break;
    }
  }
  return std::nullopt;
}

struct Element {
  std::size_t start_index = 0;
  std::size_t begin = 0;
  std::size_t content_begin = 0;
  std::size_t content_end = 0;
  std::size_t end = 0;
  bool windowed = false;
};

Element element_at(const PageScan& page, std::size_t start_index, std::size_t clue_end) {
  const auto& tags = page.tags();
  const Tag& open = tags[start_index];
  Element e;
  e.start_index = start_index;
  e.begin = open.begin;
  e.content_begin = open.end;
  if (auto close = matching_end(tags, start_index)) {
    e.content_end = tags[*close].begin;
    e.end = tags[*close].end;
  } else {
    e.windowed = true;
    e.end = std::min(page.html().size(), std::max(clue_end, open.end) + kWindowTail);
    e.content_end = e.end;
  }
  return e;
}

std::optional<html::NumberSpan> nearest_number(const PageScan& page, const Element& e,
                                               std::size_t clue_begin, std::size_t clue_end) {
  auto tokens = html::numeric_tokens(page.html(), page.mask(), e.content_begin, e.content_end);
  std::optional<html::NumberSpan> best;
  std::size_t best_dist = 0;
  bool best_after = false;
  for (const auto& t : tokens) {
    // a token overlapping the clue (e.g. digits inside "&#8364;") is never the value
    if (t.begin < clue_end && t.end > clue_begin) continue;
    bool after = t.begin >= clue_end;
    std::size_t dist = after ? t.begin - clue_end : clue_begin - t.end;
    if (!best || dist < best_dist || (dist == best_dist && after && !best_after)) {
      best = t;
      best_dist = dist;
      best_after = after;
    }
  }
  return best;
}

}  // namespace

bool Clue::is_alphabetic_code() const {
  return !literal.empty() && std::all_of(literal.begin(), literal.end(), is_ascii_alpha);
}

std::vector<Clue> parse_clue_table(std::string_view text) {
  std::vector<Clue> clues;
  std::map<std::string, std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    if (trim(view).empty() || trim(view).front() == '#') continue;

    auto tab = view.find('\t');
    if (tab == std::string_view::npos || view.find('\t', tab + 1) != std::string_view::npos) {
      throw ConfigError("clue table line " + std::to_string(line_no) +
                        ": expected literal<TAB>currency_code: \"" + line + "\"");
    }
    std::string_view literal = view.substr(0, tab);
    std::string_view code = trim(view.substr(tab + 1));
    if (trim(literal).empty()) {
      throw ConfigError("clue table line " + std::to_string(line_no) + ": empty literal");
    }
    if (code.size() != 3 || !std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
      throw ConfigError("clue table line " + std::to_string(line_no) +
                        ": currency code must be three upper-case letters, got \"" + std::string(code) + "\"");
    }
    Clue clue{std::string(literal), std::string(code)};
    std::string key = clue.is_alphabetic_code() ? html::to_lower(clue.literal) : clue.literal;
    auto [it, inserted] = seen.emplace(key, clue.currency_code);
    if (!inserted) {
      if (it->second != clue.currency_code) {
        throw ConfigError("clue table line " + std::to_string(line_no) + ": literal \"" + clue.literal +
                          "\" already mapped to " + it->second);
      }
      continue;
    }
    clues.push_back(std::move(clue));
  }
  return clues;
}

std::string_view default_clue_table() { return kDefaultClueTable; }

std::vector<Clue> default_clues() { return parse_clue_table(kDefaultClueTable); }

std::vector<Clue> load_clues(const std::optional<std::filesystem::path>& path) {
  if (!path) return default_clues();
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ConfigError("cannot read clue table " + path->string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_clue_table(buf.str());
}

PageScan::PageScan(std::string_view html)
    : html_(html), tags_(html::scan_tags(html)), mask_(html::markup_mask(html, tags_)) {}

std::vector<std::size_t> find_clue_occurrences(std::string_view html, const Clue& clue) {
  std::vector<std::size_t> hits;
  const std::string& lit = clue.literal;
  if (lit.empty() || html.size() < lit.size()) return hits;

  if (!clue.is_alphabetic_code()) {
    for (auto pos = html.find(lit); pos != std::string_view::npos; pos = html.find(lit, pos + lit.size())) {
      hits.push_back(pos);
    }
    return hits;
  }

  std::string lower = html::to_lower(lit);
  for (std::size_t i = 0; i + lit.size() <= html.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < lit.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(html[i + k])) != lower[k]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    bool left_ok = i == 0 || !is_ascii_alpha(html[i - 1]);
    bool right_ok = i + lit.size() == html.size() || !is_ascii_alpha(html[i + lit.size()]);
    if (left_ok && right_ok) {
      hits.push_back(i);
      i += lit.size() - 1;
    }
  }
  return hits;
}

std::vector<Fragment> find_associated_fragments(std::string_view html, const Clue& clue) {
  PageScan page(html);
  return find_associated_fragments(page, clue);
}

std::vector<Fragment> find_associated_fragments(const PageScan& page, const Clue& clue) {
  const auto& tags = page.tags();
  const std::string_view html = page.html();
  std::map<std::size_t, Fragment> by_element;

  for (std::size_t pos : find_clue_occurrences(html, clue)) {
    const std::size_t clue_end = pos + clue.literal.size();

    auto upper = static_cast<std::size_t>(
        std::upper_bound(tags.begin(), tags.end(), pos, [](std::size_t p, const Tag& t) { return p < t.begin; }) -
        tags.begin());
    if (upper > 0 && tags[upper - 1].end > pos) {
      // clue inside a tag: comments are invisible, attributes resolve to the parent
      if (tags[upper - 1].kind == TagKind::Markup) continue;
      --upper;
    }

    auto start = open_start_before(tags, upper);
    if (!start) continue;

    Element element = element_at(page, *start, clue_end);
    auto number = nearest_number(page, element, pos, clue_end);
    for (int climb = 0; !number && !element.windowed && climb < kMaxClimb; ++climb) {
      auto parent = open_start_before(tags, element.start_index);
      if (!parent) break;
      Element outer = element_at(page, *parent, clue_end);
      auto outer_number = nearest_number(page, outer, pos, clue_end);
      element = outer;
      number = outer_number;
    }
    if (!number) continue;
    if (by_element.count(element.begin)) continue;

    Fragment f;
    f.offset = element.begin;
    f.raw = std::string(html.substr(element.begin, element.end - element.begin));
    f.pre = std::string(html.substr(element.begin, tags[element.start_index].end - element.begin));
    f.body = std::string(html.substr(element.content_begin, element.content_end - element.content_begin));
    f.clue = clue;
    f.clue_text = std::string(html.substr(pos, clue.literal.size()));
    f.clue_offset = pos;
    f.value_text = std::string(html.substr(number->begin, number->end - number->begin));
    f.value_offset = number->begin;
    f.windowed = element.windowed;
    by_element.emplace(element.begin, std::move(f));
  }

  std::vector<Fragment> out;
  out.reserve(by_element.size());
  for (auto& [_, f] : by_element) out.push_back(std::move(f));
  return out;
}

}  // namespace wextractor
