#include <gtest/gtest.h>

#include <chrono>
#include <regex>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "page_gen.hpp"
#include "wextractor/engine.hpp"
#include "wextractor/errors.hpp"

using namespace wextractor;
using namespace std::chrono_literals;

namespace {

const RuleSet kRules = default_ruleset();
const std::vector<Clue> kClues = default_clues();
const Timestamp kT0 = parse_iso8601("2026-01-01T10:00:00.000Z");

FetchResult page_of(std::string html) {
  FetchResult r;
  r.ok = true;
  r.status = 200;
  r.body = std::move(html);
  return r;
}

PriceValue eur(std::int64_t cents) { return PriceValue::single(Money::from_cents(cents), "EUR"); }

wxtest::OracleValue to_oracle(const PriceValue& v) {
  wxtest::OracleValue o{v.amount.cents(), v.currency_code, std::nullopt};
  if (v.range) o.range = std::make_pair(v.range->first.cents(), v.range->second.cents());
  return o;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
  return s;
}

}  // namespace

TEST(FromScratch, WiggleFixtureGivesValueAndPattern) {
  auto r = do_from_scratch_extraction(wxtest::read_fixture("wiggle.html"), kRules, kClues, "http://w.test", kT0);
  ASSERT_EQ(r.values.size(), 1u);
  EXPECT_EQ(r.values[0], eur(14229));
  ASSERT_TRUE(r.pattern);
  EXPECT_EQ(r.pattern->expression, R"(Wprice">&euro;[0-9]{2,3}\.[0-9]{1,2})");
  EXPECT_EQ(r.pattern->created_at, kT0);
  ASSERT_EQ(r.fragments.size(), 2u);
  EXPECT_FALSE(r.fragments[0].deleted());
  EXPECT_EQ(r.fragments[1].deleted_by, "semr1");
}

TEST(FromScratch, NoCluesGivesNothing) {
  auto r = do_from_scratch_extraction("<html><body><p>nothing 42</p></body></html>", kRules, kClues);
  EXPECT_TRUE(r.values.empty());
  EXPECT_FALSE(r.pattern);
}

TEST(FromScratch, SamePreAdjacentPairCollapsesToRange) {
  const std::string html =
      "<html><body><div><span class=\"p\">&euro;99.00</span> &ndash; <span class=\"p\">&euro;149.00</span></div>"
      "</body></html>";
  auto r = do_from_scratch_extraction(html, kRules, kClues);
  ASSERT_EQ(r.values.size(), 1u);
  EXPECT_EQ(r.values[0], PriceValue::between(Money::from_cents(9900), Money::from_cents(14900), "EUR"));
  ASSERT_TRUE(r.pattern);
  EXPECT_EQ(do_pointing_pattern_extraction(html, *r.pattern).size(), 1u);
}

TEST(FromScratch, DistantDifferentPreValuesStayApart) {
  auto r = do_from_scratch_extraction(wxtest::read_fixture("two_prices.html"), kRules, kClues);
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_EQ(r.values[0], eur(2499));
  EXPECT_EQ(r.values[1], eur(2750));
  EXPECT_FALSE(r.pattern);
}

TEST(FromScratch, RepeatedValueCountsOnce) {
  const std::string html =
      "<html><body><div class=\"a\">&euro;10.00</div><p>x</p><b class=\"b\">&euro;10,00</b></body></html>";
  auto r = do_from_scratch_extraction(html, kRules, kClues);
  ASSERT_EQ(r.values.size(), 1u);
  EXPECT_EQ(r.values[0], eur(1000));
}

TEST(FromScratch, DifferentCurrenciesNeverPair) {
  const std::string html = "<html><body><span class=\"p\">&euro;5.00</span> - <span class=\"p\">$7.00</span></body></html>";
  auto r = do_from_scratch_extraction(html, kRules, kClues);
  EXPECT_EQ(r.values.size(), 2u);
}

TEST(PointingExtraction, PatternMatchingTwiceWithEqualValuesGivesOneValue) {
  const std::string html = "<div class=\"Wprice\">&euro;142.29</div><div class=\"Wprice\">&euro;142.29</div>";
  PointingPattern pp{R"(Wprice">&euro;[0-9]{2,3}\.[0-9]{1,2})", "EUR", kT0, ""};
  auto v = do_pointing_pattern_extraction(html, pp);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], eur(14229));
}

TEST(PointingExtraction, StructurallyChangedPageGivesNothing) {
  PointingPattern pp{R"(Wprice">&euro;[0-9]{2,3}\.[0-9]{1,2})", "EUR", kT0, ""};
  auto html = replace_all(wxtest::read_fixture("wiggle.html"), "Wprice", "PriceBox");
  EXPECT_TRUE(do_pointing_pattern_extraction(html, pp).empty());
}

TEST(Dispatcher, FourOutcomeCodesAndTuples) {
  ExtractionKit kit{"http://x.test", {}};
  FetchResult down;
  down.error = "connection refused";
  auto a = find_attribute_values(kit, down, kRules, kClues, kT0).outcome;
  auto b = find_attribute_values(kit, page_of(wxtest::read_fixture("empty.html")), kRules, kClues, kT0).outcome;
  auto c = find_attribute_values(kit, page_of(wxtest::read_fixture("two_prices.html")), kRules, kClues, kT0).outcome;
  auto d = find_attribute_values(kit, page_of(wxtest::read_fixture("single_price.html")), kRules, kClues, kT0).outcome;
  EXPECT_EQ(a.code, OutcomeCode::PageUnavailable);
  EXPECT_EQ(a.as_tuple(), std::make_pair(false, -1.0));
  EXPECT_EQ(b.code, OutcomeCode::NoPrice);
  EXPECT_EQ(b.as_tuple(), std::make_pair(false, 0.0));
  EXPECT_EQ(c.code, OutcomeCode::ManyPrices);
  EXPECT_EQ(c.as_tuple(), std::make_pair(false, -2.0));
  EXPECT_EQ(c.candidates.size(), 2u);
  EXPECT_EQ(d.code, OutcomeCode::Ok);
  EXPECT_EQ(d.as_tuple(), std::make_pair(true, 89.95));
  EXPECT_FALSE(a.value || b.value || c.value);
}

TEST(Dispatcher, HttpErrorStatusAndEmptyBodyAreUnavailable) {
  ExtractionKit kit{"http://x.test", {}};
  FetchResult r = page_of(wxtest::read_fixture("wiggle.html"));
  r.status = 404;
  EXPECT_EQ(find_attribute_values(kit, r, kRules, kClues, kT0).outcome.code, OutcomeCode::PageUnavailable);
  EXPECT_EQ(find_attribute_values(kit, page_of(""), kRules, kClues, kT0).outcome.code, OutcomeCode::PageUnavailable);
}

TEST(Dispatcher, PatternLifecycle) {
  const std::string html = wxtest::read_fixture("wiggle.html");
  ExtractionKit kit{"http://w.test", {}};

  auto first = find_attribute_values(kit, page_of(html), kRules, kClues, kT0);
  EXPECT_EQ(first.outcome.code, OutcomeCode::Ok);
  EXPECT_TRUE(first.outcome.from_scratch);
  ASSERT_EQ(first.kit.patterns.size(), 1u);
  EXPECT_EQ(first.outcome.new_pattern, first.kit.patterns[0]);
  const PointingPattern pp1 = first.kit.patterns[0];

  auto second = find_attribute_values(first.kit, page_of(html), kRules, kClues, kT0 + 1h);
  EXPECT_EQ(second.outcome.value, eur(14229));
  EXPECT_FALSE(second.outcome.from_scratch);
  EXPECT_EQ(second.outcome.used_pattern, pp1);
  EXPECT_EQ(second.kit, first.kit);

  auto dropped = replace_all(html, "142.29", "98.50");
  auto third = find_attribute_values(second.kit, page_of(dropped), kRules, kClues, kT0 + 2h);
  EXPECT_EQ(third.outcome.value, eur(9850));
  EXPECT_FALSE(third.outcome.from_scratch);
  EXPECT_EQ(third.kit.patterns.size(), 1u);

  auto mutated = replace_all(replace_all(html, "Wprice", "PriceBox"), "142.29", "137.00");
  auto fourth = find_attribute_values(third.kit, page_of(mutated), kRules, kClues, kT0 + 3h);
  EXPECT_EQ(fourth.outcome.code, OutcomeCode::Ok);
  EXPECT_EQ(fourth.outcome.value, eur(13700));
  EXPECT_TRUE(fourth.outcome.from_scratch);
  ASSERT_EQ(fourth.kit.patterns.size(), 2u);
  EXPECT_EQ(fourth.kit.patterns[0], pp1);
  EXPECT_EQ(fourth.kit.patterns[1].created_at, kT0 + 3h);
  EXPECT_NE(fourth.kit.patterns[1].expression.find("PriceBox"), std::string::npos);
}

TEST(Dispatcher, NewestPatternIsTriedFirst) {
  ExtractionKit kit{"u", {}};
  kit.add({R"(old">&euro;[0-9]{1,2})", "EUR", kT0, "u"});
  kit.add({R"(new">&euro;[0-9]{1,2})", "EUR", kT0 + 1h, "u"});
  const std::string html = "<b class=\"old\">&euro;11</b><b class=\"new\">&euro;22</b>";
  auto r = find_attribute_values(kit, page_of(html), kRules, kClues, kT0 + 2h);
  EXPECT_EQ(r.outcome.value, eur(2200));
  EXPECT_EQ(r.outcome.used_pattern->expression, kit.patterns[1].expression);
}

TEST(Dispatcher, ManyPricesFromPatternDoesNotFallBack) {
  ExtractionKit kit{"u", {}};
  kit.add({R"(p">&euro;[0-9]{1,2})", "EUR", kT0, "u"});
  const std::string html = "<b class=\"p\">&euro;11</b><i>x</i><b class=\"p\">&euro;22</b>";
  auto r = find_attribute_values(kit, page_of(html), kRules, kClues, kT0);
  EXPECT_EQ(r.outcome.code, OutcomeCode::ManyPrices);
  EXPECT_FALSE(r.outcome.from_scratch);
  EXPECT_EQ(r.kit.patterns.size(), 1u);
}

TEST(Kit, AddKeepsTimestampsNonDecreasing) {
  ExtractionKit kit;
  kit.add({"a", "EUR", kT0 + 1h, ""});
  kit.add({"b", "EUR", kT0, ""});
  EXPECT_EQ(kit.patterns[1].created_at, kT0 + 1h);
  EXPECT_EQ(kit.newest_first(), (std::vector<std::size_t>{1, 0}));
}

TEST(RangeToken, Recognized) {
  EXPECT_TRUE(contains_range_token(" - "));
  EXPECT_TRUE(contains_range_token(" &ndash; "));
  EXPECT_TRUE(contains_range_token("</span> to <span>"));
  EXPECT_FALSE(contains_range_token("</span> tomorrow <span>"));
  EXPECT_FALSE(contains_range_token("</span><span>"));
}

// Generated pages: library output must equal the brute-force oracle.
TEST(OracleEquivalence, HundredGeneratedPages) {
  int with_values = 0, with_ranges = 0, with_deletions = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto page = wxtest::generate_page(seed);
    ASSERT_LE(page.html.size(), 4096u);
    auto got = do_from_scratch_extraction(page.html, kRules, kClues, "http://gen.test");
    auto want = wxtest::oracle_from_scratch(page.html);
    ASSERT_LE(want.fragments.size(), 6u) << page.html;

    ASSERT_EQ(got.fragments.size(), want.fragments.size()) << "seed " << seed << "\n" << page.html;
    for (std::size_t i = 0; i < got.fragments.size(); ++i) {
      EXPECT_EQ(got.fragments[i].offset, want.fragments[i].begin) << "seed " << seed;
      EXPECT_EQ(got.fragments[i].value_text, want.fragments[i].value_text) << "seed " << seed;
      EXPECT_EQ(got.fragments[i].deleted(), !want.fragments[i].deleted_by.empty()) << "seed " << seed << "\n"
                                                                                  << page.html;
      if (got.fragments[i].deleted()) {
        EXPECT_EQ(*got.fragments[i].deleted_by, want.fragments[i].deleted_by.front()) << "seed " << seed;
      }
      with_deletions += got.fragments[i].deleted() ? 1 : 0;
    }

    std::vector<wxtest::OracleValue> values;
    for (const auto& v : got.values) values.push_back(to_oracle(v));
    ASSERT_EQ(values, want.values) << "seed " << seed << "\n" << page.html;
    EXPECT_EQ(got.pattern.has_value(), want.pattern_expected) << "seed " << seed;
    with_values += want.values.empty() ? 0 : 1;
    with_ranges += !want.values.empty() && want.values[0].range ? 1 : 0;
  }
  // the generator must actually exercise the interesting paths
  EXPECT_GT(with_values, 50);
  EXPECT_GT(with_ranges, 2);
  EXPECT_GT(with_deletions, 30);
}

TEST(Invariants, DistinctValuesAndKitMonotonicity) {
  ExtractionKit kit{"u", {}};
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    auto page = wxtest::generate_page(seed);
    auto before = kit.patterns.size();
    auto r = find_attribute_values(kit, page_of(page.html), kRules, kClues, kT0 + std::chrono::minutes(seed));
    EXPECT_GE(r.kit.patterns.size(), before);
    EXPECT_EQ(r.outcome.value.has_value(), r.outcome.code == OutcomeCode::Ok);
    for (std::size_t i = 0; i < r.outcome.candidates.size(); ++i) {
      for (std::size_t j = i + 1; j < r.outcome.candidates.size(); ++j) {
        EXPECT_NE(r.outcome.candidates[i], r.outcome.candidates[j]);
      }
    }
    if (r.outcome.used_pattern) {
      EXPECT_FALSE(r.outcome.from_scratch);
    }
    kit = r.kit;
  }
}
