#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wextractor/fragmenter.hpp"
#include "wextractor/patterns.hpp"
#include "wextractor/price.hpp"
#include "wextractor/rules.hpp"
#include "wextractor/timestamp.hpp"

namespace wextractor {

/// Per-URL bundle of pointing patterns. Patterns are only ever appended.
struct ExtractionKit {
  std::string url;
  std::vector<PointingPattern> patterns;

  /// Appends `pp`, lifting its timestamp to keep created_at non-decreasing.
  void add(PointingPattern pp);

  /// Pattern indices newest first; ties resolve to the later insertion.
  std::vector<std::size_t> newest_first() const;

  bool operator==(const ExtractionKit&) const = default;
};

enum class OutcomeCode { Ok, PageUnavailable, NoPrice, ManyPrices };

std::string_view to_string(OutcomeCode code);
std::optional<OutcomeCode> outcome_code_from_string(std::string_view text);

struct ExtractionOutcome {
  OutcomeCode code = OutcomeCode::NoPrice;
  std::optional<PriceValue> value;      // set iff code == Ok
  std::vector<PriceValue> candidates;   // set for ManyPrices
  std::optional<PointingPattern> used_pattern;
  std::optional<PointingPattern> new_pattern;  // appended to the kit by this run
  bool from_scratch = false;

  /// (true, v) / (false, -1) / (false, -2) / (false, 0)
  std::pair<bool, double> as_tuple() const;

  bool operator==(const ExtractionOutcome&) const = default;
};

/// What a page fetch produced. `ok` is false on transport failure.
struct FetchResult {
  bool ok = false;
  int status = 0;
  std::string body;
  bool truncated = false;
  std::string error;

  /// Status below 400 with a non-empty body.
  bool available() const { return ok && status > 0 && status < 400 && !body.empty(); }
};

using PageFetcher = std::function<FetchResult(const std::string& url)>;

struct FromScratchResult {
  std::optional<PointingPattern> pattern;
  std::vector<PriceValue> values;
  std::vector<Fragment> fragments;  // every fragment, with deletion marks
};

/// Two surviving values closer than this, with a dash or "to" between them,
/// form a (min, max) pair.
inline constexpr std::size_t kPairGap = 32;

/// Fragments for every clue, merged by element and sorted by offset.
std::vector<Fragment> gather_fragments(std::string_view html, const std::vector<Clue>& clues);

/// True when `text` contains '-', an en/em dash (glyph or entity) or the word "to".
bool contains_range_token(std::string_view text);

FromScratchResult do_from_scratch_extraction(std::string_view html, const RuleSet& rules,
                                             const std::vector<Clue>& clues, std::string_view source_url = {},
                                             Timestamp created_at = {});

std::vector<PriceValue> do_pointing_pattern_extraction(std::string_view html, const PointingPattern& pp);

struct FindResult {
  ExtractionOutcome outcome;
  ExtractionKit kit;
};

/// Main dispatcher over an already fetched page.
FindResult find_attribute_values(ExtractionKit kit, const FetchResult& page, const RuleSet& rules,
                                 const std::vector<Clue>& clues, Timestamp now);

/// Fetches kit.url first.
FindResult find_attribute_values(ExtractionKit kit, const PageFetcher& fetch, const RuleSet& rules,
                                 const std::vector<Clue>& clues, Timestamp now);

}  // namespace wextractor
