#include "wextractor/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wextractor/errors.hpp"

namespace wextractor {
namespace {

constexpr std::string_view kDefaultRuleset = R"(# Discarding rules, applied in file order.
version = 1

[rule]
name = syr1
family = syntactic
enabled = true
prefix = <strike

[rule]
name = syr2
family = syntactic
enabled = true
prefix = <script

# "save" catches savings badges; the other words cover was/now and list-price layouts.
[rule]
name = semr1
family = semantic
enabled = true
words = save, saving, discount, was, off, rrp, list price
window = 40

[rule]
name = fr1
family = frequency
enabled = true
counter = pre
x = 3

[rule]
name = fr2
family = frequency
enabled = true
counter = first-chars
n = 21
x = 3

# User limits; enable and set min/max to filter by amount.
[rule]
name = thresr1
family = threshold
enabled = false
)";

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::size_t parse_count(const std::string& rule, const std::string& key, const std::string& value) {
  if (value.empty() || !std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ConfigError("rule " + rule + ": " + key + " must be a non-negative integer, got \"" + value + "\"");
  }
  return static_cast<std::size_t>(std::stoull(value));
}

bool parse_bool(const std::string& rule, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw ConfigError("rule " + rule + ": enabled must be true or false, got \"" + value + "\"");
}

using Record = std::map<std::string, std::string>;

DiscardingRule build_rule(Record rec, int line_no) {
  auto take = [&rec](const std::string& key) -> std::optional<std::string> {
    auto it = rec.find(key);
    if (it == rec.end()) return std::nullopt;
    std::string v = it->second;
    rec.erase(it);
    return v;
  };

  auto name = take("name");
  if (!name || name->empty()) {
    throw ConfigError("rule record ending at line " + std::to_string(line_no) + " has no name");
  }
  auto need = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw ConfigError("rule " + *name + ": missing parameter \"" + key + "\"");
    return *v;
  };

  DiscardingRule rule;
  rule.name = *name;
  if (auto enabled = take("enabled")) rule.enabled = parse_bool(rule.name, *enabled);

  std::string family = need("family");
  if (family == "syntactic") {
    std::string prefix = need("prefix");
    if (prefix.empty()) throw ConfigError("rule " + rule.name + ": empty prefix");
    rule.params = SyntacticParams{prefix};
  } else if (family == "semantic") {
    SemanticParams p;
    std::istringstream words(need("words"));
    for (std::string w; std::getline(words, w, ',');) {
      w = trim(w);
      if (!w.empty()) p.words.push_back(html::to_lower(w));
    }
    if (p.words.empty()) throw ConfigError("rule " + rule.name + ": empty word list");
    if (auto window = take("window")) p.window = parse_count(rule.name, "window", *window);
    rule.params = std::move(p);
  } else if (family == "frequency") {
    FrequencyParams p;
    std::string counter = need("counter");
    if (counter == "pre") {
      p.counter = FrequencyCounter::Pre;
      if (auto n = take("n")) p.n = parse_count(rule.name, "n", *n);
    } else if (counter == "first-chars") {
      p.counter = FrequencyCounter::FirstChars;
      p.n = parse_count(rule.name, "n", need("n"));
      if (p.n == 0) throw ConfigError("rule " + rule.name + ": n must be positive");
    } else {
      throw ConfigError("rule " + rule.name + ": unknown counter \"" + counter + "\"");
    }
    p.threshold = parse_count(rule.name, "x", need("x"));
    if (p.threshold == 0) throw ConfigError("rule " + rule.name + ": x must be positive");
    rule.params = p;
  } else if (family == "threshold") {
    ThresholdParams p;
    try {
      if (auto min = take("min")) p.min = Money::from_decimal(*min);
      if (auto max = take("max")) p.max = Money::from_decimal(*max);
    } catch (const ParseError& e) {
      throw ConfigError("rule " + rule.name + ": " + e.what());
    }
    if (rule.enabled && !p.min && !p.max) {
      throw ConfigError("rule " + rule.name + ": enabled threshold rule needs min or max");
    }
    if (p.min && p.max && *p.max < *p.min) throw ConfigError("rule " + rule.name + ": max below min");
    rule.params = p;
  } else {
    throw ConfigError("rule " + rule.name + ": unknown family \"" + family + "\"");
  }

  if (!rec.empty()) {
    throw ConfigError("rule " + rule.name + ": unknown parameter \"" + rec.begin()->first + "\"");
  }
  return rule;
}

// Keyword occurrences in visible text, bounded by non-letters.
bool keyword_near(std::string_view text, const std::vector<bool>& mask, std::string_view word,
                  std::size_t value_begin, std::size_t value_end, std::size_t window) {
  if (word.empty() || text.size() < word.size()) return false;
  for (std::size_t i = 0; i + word.size() <= text.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (mask[i + k] || std::tolower(static_cast<unsigned char>(text[i + k])) != word[k]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    if (i > 0 && is_alpha(text[i - 1])) continue;
    if (i + word.size() < text.size() && is_alpha(text[i + word.size()])) continue;
    std::size_t end = i + word.size();
    std::size_t dist = end <= value_begin ? value_begin - end : (i >= value_end ? i - value_end : 0);
    if (dist <= window) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(RuleFamily family) {
  switch (family) {
    case RuleFamily::Syntactic: return "syntactic";
    case RuleFamily::Semantic: return "semantic";
    case RuleFamily::Frequency: return "frequency";
    case RuleFamily::Threshold: return "threshold";
  }
  return "unknown";
}

DiscardingRule* RuleSet::find(std::string_view name) {
  auto it = std::find_if(rules.begin(), rules.end(), [&](const DiscardingRule& r) { return r.name == name; });
  return it == rules.end() ? nullptr : &*it;
}

const DiscardingRule* RuleSet::find(std::string_view name) const {
  return const_cast<RuleSet*>(this)->find(name);
}

RuleSet parse_ruleset(std::string_view text) {
  RuleSet set;
  std::set<std::string> names;
  std::optional<Record> current;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  auto flush = [&] {
    if (!current) return;
    DiscardingRule rule = build_rule(std::move(*current), line_no);
    if (!names.insert(rule.name).second) throw ConfigError("rule " + rule.name + ": duplicate name");
    set.rules.push_back(std::move(rule));
    current.reset();
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t == "[rule]") {
      flush();
      current.emplace();
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("ruleset line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (!current) {
      if (key != "version") throw ConfigError("ruleset line " + std::to_string(line_no) + ": unknown key \"" + key + "\"");
      set.version = value;
      continue;
    }
    if (!current->emplace(key, value).second) {
      std::string who = current->count("name") ? (*current)["name"] : "at line " + std::to_string(line_no);
      throw ConfigError("rule " + who + ": repeated parameter \"" + key + "\"");
    }
  }
  flush();
  return set;
}

std::string_view default_ruleset_text() { return kDefaultRuleset; }

RuleSet default_ruleset() { return parse_ruleset(kDefaultRuleset); }

RuleSet load_discarding_rules(const std::optional<std::filesystem::path>& path) {
  if (!path) return default_ruleset();
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ConfigError("cannot read ruleset " + path->string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ruleset(buf.str());
}

std::string format_ruleset(const RuleSet& rules) {
  std::ostringstream out;
  out << "version = " << rules.version << "\n";
  for (const auto& r : rules.rules) {
    out << "\n[rule]\nname = " << r.name << "\nfamily = " << to_string(r.family())
        << "\nenabled = " << (r.enabled ? "true" : "false") << "\n";
    std::visit(
        [&out](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, SyntacticParams>) {
            out << "prefix = " << p.prefix << "\n";
          } else if constexpr (std::is_same_v<P, SemanticParams>) {
            out << "words = ";
            for (std::size_t i = 0; i < p.words.size(); ++i) out << (i ? ", " : "") << p.words[i];
            out << "\nwindow = " << p.window << "\n";
          } else if constexpr (std::is_same_v<P, FrequencyParams>) {
            out << "counter = " << (p.counter == FrequencyCounter::Pre ? "pre" : "first-chars") << "\n";
            if (p.counter == FrequencyCounter::FirstChars) out << "n = " << p.n << "\n";
            out << "x = " << p.threshold << "\n";
          } else {
            if (p.min) out << "min = " << p.min->str() << "\n";
            if (p.max) out << "max = " << p.max->str() << "\n";
          }
        },
        r.params);
  }
  return out.str();
}

void set_threshold(RuleSet& rules, std::optional<Money> min, std::optional<Money> max) {
  DiscardingRule* rule = nullptr;
  for (auto& r : rules.rules) {
    if (r.family() == RuleFamily::Threshold) {
      rule = &r;
      break;
    }
  }
  if (!rule) {
    rules.rules.push_back(DiscardingRule{"thresr1", ThresholdParams{}, false});
    rule = &rules.rules.back();
  }
  rule->params = ThresholdParams{min, max};
  rule->enabled = min.has_value() || max.has_value();
}

void apply_rule_syntactic(const DiscardingRule& rule, std::span<Fragment> fragments) {
  const auto& p = std::get<SyntacticParams>(rule.params);
  const std::string prefix = html::to_lower(p.prefix);
  for (auto& f : fragments) {
    if (f.deleted() || f.raw.size() < prefix.size()) continue;
    if (html::to_lower(std::string_view(f.raw).substr(0, prefix.size())) == prefix) f.mark_deleted(rule.name);
  }
}

void apply_rule_semantic(const DiscardingRule& rule, std::span<Fragment> fragments) {
  const auto& p = std::get<SemanticParams>(rule.params);
  for (auto& f : fragments) {
    if (f.deleted()) continue;
    auto tags = html::scan_tags(f.body);
    auto mask = html::markup_mask(f.body, tags);
    // value position relative to body
    const std::size_t body_offset = f.offset + f.pre.size();
    if (f.value_offset < body_offset) continue;
    const std::size_t vb = f.value_offset - body_offset;
    const std::size_t ve = vb + f.value_text.size();
    for (const auto& word : p.words) {
      if (keyword_near(f.body, mask, word, vb, ve, p.window)) {
        f.mark_deleted(rule.name);
        break;
      }
    }
  }
}

void apply_rule_frequency(const DiscardingRule& rule, std::span<Fragment> fragments) {
  const auto& p = std::get<FrequencyParams>(rule.params);
  auto key = [&p](const Fragment& f) {
    return p.counter == FrequencyCounter::Pre ? f.pre : f.raw.substr(0, p.n);
  };
  std::map<std::string, std::size_t> counts;
  for (const auto& f : fragments) ++counts[key(f)];
  for (auto& f : fragments) {
    if (!f.deleted() && counts[key(f)] >= p.threshold) f.mark_deleted(rule.name);
  }
}

void apply_rule_threshold(const DiscardingRule& rule, std::span<Fragment> fragments,
                          std::optional<Money> min, std::optional<Money> max) {
  for (auto& f : fragments) {
    if (f.deleted()) continue;
    Money value;
    try {
      value = parse_value(f.value_text);
    } catch (const ParseError&) {
      f.mark_deleted(std::string(kUnparseable));
      continue;
    }
    if ((min && value < *min) || (max && value > *max)) f.mark_deleted(rule.name);
  }
}

void apply_discarding_rule(const DiscardingRule& rule, std::span<Fragment> fragments) {
  if (!rule.enabled) return;
  switch (rule.family()) {
    case RuleFamily::Syntactic: apply_rule_syntactic(rule, fragments); break;
    case RuleFamily::Semantic: apply_rule_semantic(rule, fragments); break;
    case RuleFamily::Frequency: apply_rule_frequency(rule, fragments); break;
    case RuleFamily::Threshold: {
      const auto& p = std::get<ThresholdParams>(rule.params);
      apply_rule_threshold(rule, fragments, p.min, p.max);
      break;
    }
  }
}

void apply_discarding_rules(const RuleSet& rules, std::span<Fragment> fragments) {
  for (const auto& rule : rules.rules) apply_discarding_rule(rule, fragments);
}

}  // namespace wextractor
