#include "wextractor/engine.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "wextractor/errors.hpp"

namespace wextractor {
namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

struct Candidate {
  PriceValue value;
  std::size_t first_offset = 0;
  std::size_t end = 0;
  std::string pre;
  std::size_t fragment_index = 0;
};

// Two distinct values of one currency with identical pre or a short
// dash-bearing gap collapse into a (min, max) pair.
std::optional<std::size_t> collapse_pair(std::vector<Candidate>& values, std::string_view html, bool pre_counts) {
  if (values.size() != 2) return std::nullopt;
  const Candidate& a = values[0];
  const Candidate& b = values[1];
  if (a.value.currency_code != b.value.currency_code || a.value.range || b.value.range) return std::nullopt;

  bool pair = pre_counts && a.pre == b.pre;
  if (!pair && a.end <= b.first_offset && b.first_offset - a.end <= kPairGap) {
    pair = contains_range_token(html.substr(a.end, b.first_offset - a.end));
  }
  if (!pair) return std::nullopt;

  std::size_t low = a.value.amount <= b.value.amount ? 0 : 1;
  Candidate merged = values[low];
  merged.value = PriceValue::between(a.value.amount, b.value.amount, a.value.currency_code);
  values = {merged};
  return merged.fragment_index;
}

}  // namespace

void ExtractionKit::add(PointingPattern pp) {
  if (!patterns.empty() && pp.created_at < patterns.back().created_at) pp.created_at = patterns.back().created_at;
  patterns.push_back(std::move(pp));
}

std::vector<std::size_t> ExtractionKit::newest_first() const {
  std::vector<std::size_t> order(patterns.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [this](std::size_t x, std::size_t y) {
    if (patterns[x].created_at != patterns[y].created_at) return patterns[x].created_at > patterns[y].created_at;
    return x > y;
  });
  return order;
}

std::string_view to_string(OutcomeCode code) {
  switch (code) {
    case OutcomeCode::Ok: return "OK";
    case OutcomeCode::PageUnavailable: return "PAGE_UNAVAILABLE";
    case OutcomeCode::NoPrice: return "NO_PRICE";
    case OutcomeCode::ManyPrices: return "MANY_PRICES";
  }
  return "NO_PRICE";
}

std::optional<OutcomeCode> outcome_code_from_string(std::string_view text) {
  for (auto c : {OutcomeCode::Ok, OutcomeCode::PageUnavailable, OutcomeCode::NoPrice, OutcomeCode::ManyPrices}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::pair<bool, double> ExtractionOutcome::as_tuple() const {
  switch (code) {
    case OutcomeCode::Ok: return {true, value->amount.to_double()};
    case OutcomeCode::PageUnavailable: return {false, -1.0};
    case OutcomeCode::ManyPrices: return {false, -2.0};
    case OutcomeCode::NoPrice: return {false, 0.0};
  }
  return {false, 0.0};
}

bool contains_range_token(std::string_view text) {
  for (std::string_view dash : {"-", "\xE2\x80\x93", "\xE2\x80\x94", "&ndash;", "&mdash;", "&#8211;", "&#8212;"}) {
    if (text.find(dash) != std::string_view::npos) return true;
  }
  for (std::size_t i = 0; i + 2 <= text.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) != 't' ||
        std::tolower(static_cast<unsigned char>(text[i + 1])) != 'o') {
      continue;
    }
    bool left = i == 0 || !is_alpha(text[i - 1]);
    bool right = i + 2 == text.size() || !is_alpha(text[i + 2]);
    if (left && right) return true;
  }
  return false;
}

std::vector<Fragment> gather_fragments(std::string_view html, const std::vector<Clue>& clues) {
  PageScan page(html);
  std::vector<Fragment> all;
  for (const auto& clue : clues) {
    for (auto& f : find_associated_fragments(page, clue)) {
      bool dup = std::any_of(all.begin(), all.end(), [&](const Fragment& g) { return g.offset == f.offset; });
      if (!dup) all.push_back(std::move(f));
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Fragment& a, const Fragment& b) { return a.offset < b.offset; });
  return all;
}

FromScratchResult do_from_scratch_extraction(std::string_view html, const RuleSet& rules,
                                             const std::vector<Clue>& clues, std::string_view source_url,
                                             Timestamp created_at) {
  FromScratchResult result;
  result.fragments = gather_fragments(html, clues);
  apply_discarding_rules(rules, result.fragments);

  std::vector<Candidate> distinct;
  for (std::size_t i = 0; i < result.fragments.size(); ++i) {
    const Fragment& f = result.fragments[i];
    if (f.deleted()) continue;
    Money amount;
    try {
      amount = parse_value(f.value_text);
    } catch (const ParseError&) {
      continue;
    }
    if (amount.cents() <= 0) continue;
    PriceValue v = PriceValue::single(amount, f.clue.currency_code);
    auto it = std::find_if(distinct.begin(), distinct.end(), [&](const Candidate& c) { return c.value == v; });
    if (it == distinct.end()) distinct.push_back({v, f.offset, f.end_offset(), f.pre, i});
  }

  std::optional<std::size_t> source;
  if (auto low = collapse_pair(distinct, html, true)) {
    source = *low;
  } else if (distinct.size() == 1) {
    source = distinct.front().fragment_index;
  }

  for (const auto& c : distinct) result.values.push_back(c.value);
  if (source) {
    try {
      result.pattern = extract_pointing_pattern(result.fragments[*source], source_url, created_at);
    } catch (const SynthesisError&) {
      // a value without a usable pattern still counts; the next visit re-runs from scratch
    }
  }
  return result;
}

std::vector<PriceValue> do_pointing_pattern_extraction(std::string_view html, const PointingPattern& pp) {
  std::vector<Candidate> distinct;
  for (const auto& m : find_pattern_matches(html, pp)) {
    PriceValue v = extract_value_from_match(m.text, pp);
    if (v.amount.cents() <= 0) continue;
    const std::size_t end = m.offset + m.text.size();
    auto it = std::find_if(distinct.begin(), distinct.end(), [&](const Candidate& c) { return c.value == v; });
    if (it == distinct.end()) distinct.push_back({v, m.offset, end, {}, 0});
  }
  collapse_pair(distinct, html, false);
  std::vector<PriceValue> out;
  for (auto& c : distinct) out.push_back(std::move(c.value));
  return out;
}

FindResult find_attribute_values(ExtractionKit kit, const FetchResult& page, const RuleSet& rules,
                                 const std::vector<Clue>& clues, Timestamp now) {
  ExtractionOutcome outcome;
  if (!page.available()) {
    outcome.code = OutcomeCode::PageUnavailable;
    return {outcome, std::move(kit)};
  }
  const std::string& html = page.body;

  std::vector<PriceValue> found;
  for (std::size_t idx : kit.newest_first()) {
    found = do_pointing_pattern_extraction(html, kit.patterns[idx]);
    if (!found.empty()) {
      outcome.used_pattern = kit.patterns[idx];
      break;
    }
  }

  if (found.size() == 1) {
    outcome.code = OutcomeCode::Ok;
    outcome.value = found.front();
    return {outcome, std::move(kit)};
  }
  if (found.size() > 1) {
    outcome.code = OutcomeCode::ManyPrices;
    outcome.candidates = std::move(found);
    return {outcome, std::move(kit)};
  }

  outcome.from_scratch = true;
  FromScratchResult scratch = do_from_scratch_extraction(html, rules, clues, kit.url, now);
  if (scratch.values.empty()) {
    outcome.code = OutcomeCode::NoPrice;
  } else if (scratch.values.size() > 1) {
    outcome.code = OutcomeCode::ManyPrices;
    outcome.candidates = std::move(scratch.values);
  } else {
    outcome.code = OutcomeCode::Ok;
    outcome.value = scratch.values.front();
    if (scratch.pattern) {
      kit.add(*scratch.pattern);
      outcome.new_pattern = kit.patterns.back();
    }
  }
  return {outcome, std::move(kit)};
}

FindResult find_attribute_values(ExtractionKit kit, const PageFetcher& fetch, const RuleSet& rules,
                                 const std::vector<Clue>& clues, Timestamp now) {
  FetchResult page = fetch(kit.url);
  return find_attribute_values(std::move(kit), page, rules, clues, now);
}

}  // namespace wextractor
