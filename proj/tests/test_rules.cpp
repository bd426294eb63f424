#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "page_gen.hpp"
#include "wextractor/engine.hpp"
#include "wextractor/errors.hpp"
#include "wextractor/rules.hpp"

using namespace wextractor;

namespace {

// A fragment laid out as if it sat at `offset` in some page.
Fragment make_fragment(const std::string& tag, const std::string& attrs, const std::string& body,
                       const std::string& value, std::size_t offset = 0) {
  Fragment f;
  f.pre = "<" + tag + attrs + ">";
  f.body = body;
  f.raw = f.pre + body + "</" + tag + ">";
  f.offset = offset;
  f.value_text = value;
  f.value_offset = offset + f.pre.size() + body.find(value);
  f.clue = Clue{"&euro;", "EUR"};
  return f;
}

const DiscardingRule& rule(const RuleSet& rs, std::string_view name) {
  const auto* r = rs.find(name);
  if (!r) throw std::runtime_error("no rule " + std::string(name));
  return *r;
}

std::set<std::size_t> deleted_set(const std::vector<Fragment>& frags) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < frags.size(); ++i) {
    if (frags[i].deleted()) out.insert(i);
  }
  return out;
}

std::vector<std::string> fixture_pages() {
  std::vector<std::string> pages;
  for (const char* f : {"wiggle.html", "empty.html", "two_prices.html", "single_price.html"}) {
    pages.push_back(wxtest::read_fixture(f));
  }
  for (const auto& e : std::filesystem::directory_iterator(wxtest::fixture_path("corpus"))) {
    if (e.is_directory()) pages.push_back(wxtest::read_text(e.path() / "page.html"));
  }
  return pages;
}

}  // namespace

TEST(Ruleset, DefaultInventory) {
  RuleSet rs = load_discarding_rules(std::nullopt);
  ASSERT_EQ(rs.rules.size(), 6u);
  std::vector<std::string> names;
  for (const auto& r : rs.rules) names.push_back(r.name);
  EXPECT_EQ(names, (std::vector<std::string>{"syr1", "syr2", "semr1", "fr1", "fr2", "thresr1"}));
  EXPECT_FALSE(rule(rs, "thresr1").enabled);
  EXPECT_EQ(std::get<SyntacticParams>(rule(rs, "syr1").params).prefix, "<strike");
  EXPECT_EQ(std::get<SyntacticParams>(rule(rs, "syr2").params).prefix, "<script");
  const auto& fr1 = std::get<FrequencyParams>(rule(rs, "fr1").params);
  EXPECT_EQ(fr1.counter, FrequencyCounter::Pre);
  EXPECT_EQ(fr1.threshold, 3u);
  const auto& fr2 = std::get<FrequencyParams>(rule(rs, "fr2").params);
  EXPECT_EQ(fr2.counter, FrequencyCounter::FirstChars);
  EXPECT_EQ(fr2.n, 21u);
  EXPECT_EQ(fr2.threshold, 3u);
  const auto& sem = std::get<SemanticParams>(rule(rs, "semr1").params);
  EXPECT_EQ(sem.window, 40u);
  EXPECT_NE(std::find(sem.words.begin(), sem.words.end(), "save"), sem.words.end());
}

TEST(Ruleset, ShippedFileEqualsBuiltIn) {
  EXPECT_EQ(load_discarding_rules(wxtest::source_dir() / "config" / "rules.conf"), default_ruleset());
}

TEST(Ruleset, FormatRoundTrips) {
  RuleSet rs = default_ruleset();
  set_threshold(rs, Money::from_cents(600000), Money::from_cents(1200000));
  EXPECT_EQ(parse_ruleset(format_ruleset(rs)), rs);
}

TEST(Ruleset, ThresholdBoundsFromSource) {
  RuleSet rs = parse_ruleset(
      "version = 2\n[rule]\nname = thresr1\nfamily = threshold\nenabled = true\nmin = 6000\nmax = 12000\n");
  const auto& p = std::get<ThresholdParams>(rule(rs, "thresr1").params);
  EXPECT_EQ(p.min, Money::from_cents(600000));
  EXPECT_EQ(p.max, Money::from_cents(1200000));
  EXPECT_EQ(rs.version, "2");
}

TEST(Ruleset, ConfigurationErrorsNameTheRule) {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_ruleset(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("[rule]\nname = frx\nfamily = frequency\ncounter = pre\n", "frx");
  expect_error("[rule]\nname = odd\nfamily = telepathic\n", "odd");
  expect_error("[rule]\nname = s\nfamily = syntactic\nprefix = <b\ncolour = red\n", "s");
  expect_error("[rule]\nname = a\nfamily = syntactic\nprefix = <b\n[rule]\nname = a\nfamily = syntactic\nprefix = <i\n",
               "a");
  expect_error("[rule]\nname = t\nfamily = threshold\nenabled = true\n", "t");
}

TEST(Syntactic, StrikeAndScript) {
  RuleSet rs = default_ruleset();
  std::vector<Fragment> f{make_fragment("strike", "", "$20", "20"), make_fragment("div", "", "$20", "20"),
                          make_fragment("script", "", "var p=\"&euro;9\";", "9"),
                          make_fragment("STRIKE", " class=\"o\"", "$5", "5")};
  apply_rule_syntactic(rule(rs, "syr1"), f);
  apply_rule_syntactic(rule(rs, "syr2"), f);
  EXPECT_EQ(f[0].deleted_by, "syr1");
  EXPECT_FALSE(f[1].deleted());
  EXPECT_EQ(f[2].deleted_by, "syr2");
  EXPECT_EQ(f[3].deleted_by, "syr1");
}

TEST(Semantic, SavingAndPriceFragments) {
  RuleSet rs = default_ruleset();
  std::vector<Fragment> f{make_fragment("div", " class=\"saving\"", "SAVE20%=&euro;57.71", "57.71"),
                          make_fragment("div", "", "Save 1,05\xE2\x82\xAC", "1,05"),
                          make_fragment("span", "", "19,95&euro;", "19,95")};
  apply_rule_semantic(rule(rs, "semr1"), f);
  EXPECT_EQ(f[0].deleted_by, "semr1");
  EXPECT_EQ(f[1].deleted_by, "semr1");
  EXPECT_FALSE(f[2].deleted());
}

TEST(Semantic, WindowAndWordBoundaries) {
  RuleSet rs = default_ruleset();
  const std::string pad40(40, ' ');
  const std::string pad41(41, ' ');
  std::vector<Fragment> f{make_fragment("p", "", "save" + pad40 + "12.00", "12.00"),
                          make_fragment("p", "", "save" + pad41 + "12.00", "12.00"),
                          make_fragment("p", "", "Offer 12.00", "12.00"),
                          make_fragment("p", " class=\"saving\"", "12.00", "12.00"),
                          make_fragment("p", "", "12.00 <i>was</i>", "12.00")};
  apply_rule_semantic(rule(rs, "semr1"), f);
  EXPECT_TRUE(f[0].deleted());
  EXPECT_FALSE(f[1].deleted());
  EXPECT_FALSE(f[2].deleted());
  EXPECT_FALSE(f[3].deleted());  // attributes are not body text
  EXPECT_TRUE(f[4].deleted());
}

TEST(Frequency, GroupSizes) {
  RuleSet rs = default_ruleset();
  std::vector<Fragment> three(3, make_fragment("span", " class=\"m\"", "&euro;1", "1"));
  apply_rule_frequency(rule(rs, "fr1"), three);
  EXPECT_EQ(deleted_set(three).size(), 3u);
  std::vector<Fragment> two(2, make_fragment("span", " class=\"m\"", "&euro;1", "1"));
  apply_rule_frequency(rule(rs, "fr1"), two);
  EXPECT_TRUE(deleted_set(two).empty());
}

TEST(Frequency, CountsDeletedFragmentsToo) {
  RuleSet rs = default_ruleset();
  std::vector<Fragment> f(3, make_fragment("span", " class=\"m\"", "&euro;1", "1"));
  f[0].mark_deleted("syr1");
  apply_rule_frequency(rule(rs, "fr1"), f);
  EXPECT_EQ(f[0].deleted_by, "syr1");
  EXPECT_EQ(f[1].deleted_by, "fr1");
  EXPECT_EQ(f[2].deleted_by, "fr1");
}

TEST(Frequency, TwelveFragmentsFourGroupsMatchOracle) {
  RuleSet rs = default_ruleset();
  std::vector<Fragment> f;
  const int sizes[] = {1, 2, 3, 6};
  for (int g = 0; g < 4; ++g) {
    for (int k = 0; k < sizes[g]; ++k) {
      f.push_back(make_fragment("div", " class=\"product-price-" + std::to_string(g) + "\"", "&euro;1", "1"));
    }
  }
  ASSERT_EQ(f.size(), 12u);
  auto by_pre = f;
  apply_rule_frequency(rule(rs, "fr1"), by_pre);
  std::vector<std::string> pres, prefixes;
  for (const auto& x : f) {
    pres.push_back(x.pre);
    prefixes.push_back(x.raw.substr(0, 21));
  }
  auto want = wxtest::oracle_frequency(pres, 3);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(by_pre[i].deleted(), want[i]) << i;

  auto by_prefix = f;
  apply_rule_frequency(rule(rs, "fr2"), by_prefix);
  auto want2 = wxtest::oracle_frequency(prefixes, 3);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(by_prefix[i].deleted(), want2[i]) << i;
  EXPECT_EQ(deleted_set(by_prefix).size(), 12u);  // all share `<div class="product-p`
}

TEST(Frequency, HundredGeneratedPagesMatchOracle) {
  RuleSet rs = default_ruleset();
  std::mt19937 rng(11);
  for (std::uint64_t seed = 500; seed < 600; ++seed) {
    wxtest::GenOptions opts;
    opts.max_prices = 12;
    opts.max_bytes = 16384;
    auto base = gather_fragments(wxtest::generate_page(seed, opts).html, default_clues());
    for (auto& f : base) {
      if (rng() % 5 == 0) f.mark_deleted("earlier");  // counting must ignore prior marks
    }
    for (const char* name : {"fr1", "fr2"}) {
      auto frags = base;
      apply_rule_frequency(rule(rs, name), frags);
      std::vector<std::string> keys;
      for (const auto& f : base) keys.push_back(std::string(name) == "fr1" ? f.pre : f.raw.substr(0, 21));
      auto want = wxtest::oracle_frequency(keys, 3);
      for (std::size_t i = 0; i < frags.size(); ++i) {
        EXPECT_EQ(frags[i].deleted(), base[i].deleted() || want[i]) << "seed " << seed << " " << name;
        if (base[i].deleted()) {
          EXPECT_EQ(frags[i].deleted_by, "earlier");
        }
      }
    }
  }
}

TEST(Threshold, InclusiveBoundsAndUnparseable) {
  RuleSet rs = default_ruleset();
  set_threshold(rs, Money::from_cents(600000), Money::from_cents(1200000));
  std::vector<Fragment> f{make_fragment("b", "", "&euro;4500", "4500"), make_fragment("b", "", "&euro;9000", "9000"),
                          make_fragment("b", "", "&euro;6000", "6000"), make_fragment("b", "", "&euro;12000", "12000"),
                          make_fragment("b", "", "&euro;12000.01", "12000.01"), make_fragment("b", "", "&euro;", "")};
  apply_discarding_rule(rule(rs, "thresr1"), f);
  EXPECT_EQ(f[0].deleted_by, "thresr1");
  EXPECT_FALSE(f[1].deleted());
  EXPECT_FALSE(f[2].deleted());
  EXPECT_FALSE(f[3].deleted());
  EXPECT_EQ(f[4].deleted_by, "thresr1");
  EXPECT_EQ(f[5].deleted_by, std::string(kUnparseable));
}

TEST(Threshold, DisabledRuleIsInert) {
  RuleSet rs = default_ruleset();
  std::vector<Fragment> f{make_fragment("b", "", "&euro;1", "1")};
  apply_discarding_rule(rule(rs, "thresr1"), f);
  EXPECT_FALSE(f[0].deleted());
}

TEST(ApplyAll, GroupsetFixture) {
  auto frags = gather_fragments(wxtest::read_fixture("wiggle.html"), default_clues());
  apply_discarding_rules(default_ruleset(), frags);
  ASSERT_EQ(frags.size(), 2u);
  EXPECT_FALSE(frags[0].deleted());
  EXPECT_EQ(frags[1].deleted_by, "semr1");
  std::vector<Fragment> none;
  apply_discarding_rules(default_ruleset(), none);
  EXPECT_TRUE(none.empty());
}

TEST(Properties, PermutationsGiveIdenticalDeletionSets) {
  RuleSet base = default_ruleset();
  std::mt19937 rng(2024);
  int nonempty = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto frags = gather_fragments(wxtest::generate_page(3000 + trial).html, default_clues());
    RuleSet rs = base;
    set_threshold(rs, Money::from_cents(static_cast<std::int64_t>(rng() % 2000) * 100),
                  Money::from_cents(static_cast<std::int64_t>(2000 + rng() % 8000) * 100));
    std::vector<DiscardingRule> per_fragment{rule(rs, "syr1"), rule(rs, "syr2"), rule(rs, "semr1"),
                                             rule(rs, "thresr1")};
    std::vector<DiscardingRule> all = rs.rules;

    for (auto* set : {&per_fragment, &all}) {
      RuleSet a{*set, "p"};
      auto reference = frags;
      apply_discarding_rules(a, reference);
      std::shuffle(a.rules.begin(), a.rules.end(), rng);
      auto shuffled = frags;
      apply_discarding_rules(a, shuffled);
      ASSERT_EQ(deleted_set(shuffled), deleted_set(reference)) << "trial " << trial;
      nonempty += deleted_set(reference).empty() ? 0 : 1;
    }
  }
  EXPECT_GT(nonempty, 100);
}

TEST(Properties, IdempotentAndMonotoneOnFixtures) {
  RuleSet rs = default_ruleset();
  set_threshold(rs, Money::from_cents(1000), Money::from_cents(500000));
  for (const auto& html : fixture_pages()) {
    auto once = gather_fragments(html, default_clues());
    apply_discarding_rules(rs, once);
    auto twice = once;
    apply_discarding_rules(rs, twice);
    EXPECT_EQ(once, twice);

    std::set<std::size_t> previous;
    for (std::size_t k = 0; k <= rs.rules.size(); ++k) {
      RuleSet prefix{{rs.rules.begin(), rs.rules.begin() + static_cast<long>(k)}, "k"};
      auto frags = gather_fragments(html, default_clues());
      apply_discarding_rules(prefix, frags);
      auto now = deleted_set(frags);
      EXPECT_TRUE(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
      previous = now;
    }
  }
}
