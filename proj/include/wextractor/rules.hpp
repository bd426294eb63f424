#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wextractor/fragmenter.hpp"
#include "wextractor/price.hpp"

namespace wextractor {

enum class RuleFamily { Syntactic, Semantic, Frequency, Threshold };

std::string_view to_string(RuleFamily family);

/// Deletes fragments whose raw text begins with `prefix`.
struct SyntacticParams {
  std::string prefix;
  bool operator==(const SyntacticParams&) const = default;
};

/// Deletes fragments with a keyword within `window` characters of the value.
struct SemanticParams {
  std::vector<std::string> words;
  std::size_t window = 40;
  bool operator==(const SemanticParams&) const = default;
};

enum class FrequencyCounter { Pre, FirstChars };

/// Deletes every fragment in a group of size >= threshold, grouped by pre or
/// by the first `n` characters of raw.
struct FrequencyParams {
  FrequencyCounter counter = FrequencyCounter::Pre;
  std::size_t n = 21;
  std::size_t threshold = 3;
  bool operator==(const FrequencyParams&) const = default;
};

/// Deletes fragments whose value lies outside [min, max]. Missing bounds are open.
struct ThresholdParams {
  std::optional<Money> min;
  std::optional<Money> max;
  bool operator==(const ThresholdParams&) const = default;
};

using RuleParams = std::variant<SyntacticParams, SemanticParams, FrequencyParams, ThresholdParams>;

struct DiscardingRule {
  std::string name;
  RuleParams params;
  bool enabled = true;

  RuleFamily family() const { return static_cast<RuleFamily>(params.index()); }
  bool operator==(const DiscardingRule&) const = default;
};

struct RuleSet {
  std::vector<DiscardingRule> rules;
  std::string version = "1";

  DiscardingRule* find(std::string_view name);
  const DiscardingRule* find(std::string_view name) const;

  bool operator==(const RuleSet&) const = default;
};

/// deleted_by value for fragments whose value cannot be parsed by a threshold rule.
inline constexpr std::string_view kUnparseable = "unparseable";

/// Parses the ruleset format: `key = value` lines grouped into `[rule]`
/// records, `#` comments. Throws ConfigError naming the offending rule.
RuleSet parse_ruleset(std::string_view text);
std::string_view default_ruleset_text();

/// The built-in rules; thresr1 ships disabled.
RuleSet default_ruleset();

/// Loads a ruleset file, or the default set when `path` is empty.
RuleSet load_discarding_rules(const std::optional<std::filesystem::path>& path);

/// Serializes back to the ruleset format.
std::string format_ruleset(const RuleSet& rules);

/// Enables the threshold rule with the given bounds (adds thresr1 if absent).
void set_threshold(RuleSet& rules, std::optional<Money> min, std::optional<Money> max);

void apply_rule_syntactic(const DiscardingRule& rule, std::span<Fragment> fragments);
void apply_rule_semantic(const DiscardingRule& rule, std::span<Fragment> fragments);
void apply_rule_frequency(const DiscardingRule& rule, std::span<Fragment> fragments);
void apply_rule_threshold(const DiscardingRule& rule, std::span<Fragment> fragments,
                          std::optional<Money> min, std::optional<Money> max);

/// Dispatches on the rule family. Disabled rules are skipped.
void apply_discarding_rule(const DiscardingRule& rule, std::span<Fragment> fragments);

/// Applies every enabled rule in order. Never clears an existing mark.
void apply_discarding_rules(const RuleSet& rules, std::span<Fragment> fragments);

}  // namespace wextractor
