#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wextractor/engine.hpp"

namespace wextractor {

/// One annotated detail page: `<dir>/<site>/page.html` plus `gold.json`.
struct CorpusEntry {
  std::string site;
  std::filesystem::path html_path;
  PriceValue gold;
  std::string url;
};

enum class Decision { TruePositive, FalsePositive, TrueNegative, FalseNegative };

std::string_view to_string(Decision d);

/// Fragment-level confusion counts for one page.
struct SiteScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double precision = 1.0;
  double specificity = 1.0;
  bool precision_undefined = false;  // tp + fp == 0 while the gold was discarded

  static SiteScore from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);
  std::size_t total() const { return tp + fp + tn + fn; }
};

/// Per-fragment decision, the raw material for every score.
struct FragmentAudit {
  std::string site;
  std::size_t offset = 0;
  std::string pre;
  std::string value_text;
  std::optional<std::string> deleted_by;
  bool gold = false;
  Decision decision = Decision::TrueNegative;
};

struct SiteResult {
  CorpusEntry entry;
  SiteScore score;
  std::size_t fragment_count = 0;
  std::vector<PriceValue> values;  // values returned by the from-scratch extraction
  bool extraction_correct = false; // exactly one value, equal to gold
};

struct SkippedEntry {
  std::string site;
  std::string reason;
};

struct EvaluationReport {
  std::vector<SiteResult> sites;
  std::vector<SkippedEntry> skipped;
  std::vector<FragmentAudit> audit;
  double macro_precision = 0.0;
  double macro_specificity = 0.0;
  double micro_precision = 0.0;
  double micro_specificity = 0.0;
  std::size_t perfect_sites = 0;
};

/// True when a fragment's amount equals the gold amount (range gold: either bound).
bool matches_gold(const Fragment& f, const PriceValue& gold);

/// Classifies every fragment of one page.
std::vector<FragmentAudit> audit_fragments(const std::string& site, const std::vector<Fragment>& fragments,
                                           const PriceValue& gold);

/// Reads the corpus layout; unreadable entries land in `skipped`.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir, std::vector<SkippedEntry>& skipped);

EvaluationReport evaluate_corpus(const std::filesystem::path& dir, const RuleSet& rules,
                                 const std::vector<Clue>& clues);

nlohmann::json report_to_json(const EvaluationReport& report);
std::string report_table(const EvaluationReport& report);

}  // namespace wextractor
