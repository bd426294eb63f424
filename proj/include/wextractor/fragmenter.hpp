#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wextractor/html_scan.hpp"

namespace wextractor {

/// A literal token that signals a price, e.g. "&euro;" or "$".
struct Clue {
  std::string literal;
  std::string currency_code;

  /// Alphabetic codes ("EUR") match case-insensitively on word boundaries;
  /// entities and symbols match exactly.
  bool is_alphabetic_code() const;

  bool operator==(const Clue&) const = default;
};

/// A candidate price container: the innermost element around a clue occurrence.
struct Fragment {
  std::string raw;        // start tag through matching end tag
  std::string pre;        // start tag including attributes
  std::string body;       // raw without the enclosing start and end tag
  Clue clue;
  std::string clue_text;  // clue as spelled on the page
  std::string value_text; // numeric token nearest to the clue
  std::size_t offset = 0;       // offset of raw in the page
  std::size_t clue_offset = 0;  // offset of the clue occurrence in the page
  std::size_t value_offset = 0; // offset of value_text in the page
  bool windowed = false;        // no matching end tag; raw is a fixed window
  std::optional<std::string> deleted_by;

  bool deleted() const { return deleted_by.has_value(); }
  void mark_deleted(std::string rule) {
    if (!deleted_by) deleted_by = std::move(rule);
  }

  std::size_t end_offset() const { return offset + raw.size(); }
  bool operator==(const Fragment&) const = default;
};

/// Parses the clue table format: one `literal<TAB>currency_code` per line,
/// blank lines and `#` comments ignored. Throws ConfigError naming the line.
std::vector<Clue> parse_clue_table(std::string_view text);

/// Built-in clue table, the same as config/clues.tsv.
std::vector<Clue> default_clues();
std::string_view default_clue_table();

/// Loads a clue table from disk, or the built-in list when `path` is empty.
std::vector<Clue> load_clues(const std::optional<std::filesystem::path>& path);

/// Tags and visibility mask of a page, shared across clues.
class PageScan {
 public:
  explicit PageScan(std::string_view html);

  std::string_view html() const { return html_; }
  const std::vector<html::Tag>& tags() const { return tags_; }
  const std::vector<bool>& mask() const { return mask_; }

 private:
  std::string_view html_;
  std::vector<html::Tag> tags_;
  std::vector<bool> mask_;
};

/// Largest element span accepted before falling back to a window.
inline constexpr std::size_t kMaxElementSpan = 2048;
/// Characters kept past the clue by the window fallback.
inline constexpr std::size_t kWindowTail = 160;
/// How many enclosing elements to climb when the innermost one has no number.
inline constexpr int kMaxClimb = 2;

/// Offsets of every occurrence of `clue` in `html`.
std::vector<std::size_t> find_clue_occurrences(std::string_view html, const Clue& clue);

/// One fragment per resolved enclosing element, ascending by offset.
std::vector<Fragment> find_associated_fragments(std::string_view html, const Clue& clue);
std::vector<Fragment> find_associated_fragments(const PageScan& page, const Clue& clue);

}  // namespace wextractor
