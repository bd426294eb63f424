#include "wextractor/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wextractor/errors.hpp"
#include "wextractor/json_io.hpp"

namespace wextractor {
namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string pct(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%6.2f%%", v * 100.0);
  return buf;
}

}  // namespace

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::TruePositive: return "TP";
    case Decision::FalsePositive: return "FP";
    case Decision::TrueNegative: return "TN";
    case Decision::FalseNegative: return "FN";
  }
  return "?";
}

SiteScore SiteScore::from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  SiteScore s{tp, fp, tn, fn};
  if (tp + fp > 0) {
    s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else if (fn > 0) {
    s.precision = 0.0;
    s.precision_undefined = true;
  } else {
    s.precision = 1.0;
  }
  s.specificity = tn + fp > 0 ? static_cast<double>(tn) / static_cast<double>(tn + fp) : 1.0;
  return s;
}

bool matches_gold(const Fragment& f, const PriceValue& gold) {
  if (f.clue.currency_code != gold.currency_code) return false;
  try {
    Money v = parse_value(f.value_text);
    if (gold.range) return v == gold.range->first || v == gold.range->second;
    return v == gold.amount;
  } catch (const ParseError&) {
    return false;
  }
}

std::vector<FragmentAudit> audit_fragments(const std::string& site, const std::vector<Fragment>& fragments,
                                           const PriceValue& gold) {
  std::vector<FragmentAudit> out;
  for (const auto& f : fragments) {
    FragmentAudit a{site, f.offset, f.pre, f.value_text, f.deleted_by, matches_gold(f, gold)};
    if (f.deleted()) {
      a.decision = a.gold ? Decision::FalseNegative : Decision::TrueNegative;
    } else {
      a.decision = a.gold ? Decision::TruePositive : Decision::FalsePositive;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir, std::vector<SkippedEntry>& skipped) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("corpus directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> sites;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_directory()) sites.push_back(e.path());
  }
  std::sort(sites.begin(), sites.end());

  std::vector<CorpusEntry> entries;
  for (const auto& site_dir : sites) {
    const std::string site = site_dir.filename().string();
    try {
      auto gold = nlohmann::json::parse(read_file(site_dir / "gold.json"));
      CorpusEntry entry;
      entry.site = site;
      entry.html_path = site_dir / "page.html";
      if (!std::filesystem::is_regular_file(entry.html_path)) throw std::runtime_error("missing page.html");
      entry.url = gold.value("url", "");
      entry.gold = price_from_json(gold);
      entries.push_back(std::move(entry));
    } catch (const std::exception& e) {
      skipped.push_back({site, e.what()});
    }
  }
  return entries;
}

EvaluationReport evaluate_corpus(const std::filesystem::path& dir, const RuleSet& rules,
                                 const std::vector<Clue>& clues) {
  EvaluationReport report;
  auto entries = load_corpus(dir, report.skipped);

  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (auto& entry : entries) {
    std::string html;
    try {
      html = read_file(entry.html_path);
    } catch (const std::exception& e) {
      report.skipped.push_back({entry.site, e.what()});
      continue;
    }
    FromScratchResult scratch = do_from_scratch_extraction(html, rules, clues, entry.url);
    auto audit = audit_fragments(entry.site, scratch.fragments, entry.gold);

    std::size_t c[4] = {0, 0, 0, 0};
    for (const auto& a : audit) ++c[static_cast<int>(a.decision)];
    SiteResult r;
    r.score = SiteScore::from_counts(c[0], c[1], c[2], c[3]);
    r.fragment_count = scratch.fragments.size();
    r.values = scratch.values;
    r.extraction_correct = scratch.values.size() == 1 && scratch.values.front().amount == entry.gold.amount &&
                           scratch.values.front().currency_code == entry.gold.currency_code;
    r.entry = std::move(entry);

    tp += c[0];
    fp += c[1];
    tn += c[2];
    fn += c[3];
    if (r.score.precision == 1.0 && r.score.specificity == 1.0 && !r.score.precision_undefined) ++report.perfect_sites;
    report.audit.insert(report.audit.end(), audit.begin(), audit.end());
    report.sites.push_back(std::move(r));
  }

  if (!report.sites.empty()) {
    double p = 0.0, s = 0.0;
    for (const auto& r : report.sites) {
      p += r.score.precision;
      s += r.score.specificity;
    }
    report.macro_precision = p / static_cast<double>(report.sites.size());
    report.macro_specificity = s / static_cast<double>(report.sites.size());
  }
  SiteScore micro = SiteScore::from_counts(tp, fp, tn, fn);
  report.micro_precision = micro.precision;
  report.micro_specificity = micro.specificity;
  return report;
}

nlohmann::json report_to_json(const EvaluationReport& report) {
  nlohmann::json j;
  j["units"] = "fragment-level decisions: surviving gold = TP, surviving other = FP, discarded other = TN, "
               "discarded gold = FN";
  j["macro"] = {{"precision", report.macro_precision}, {"specificity", report.macro_specificity}};
  j["micro"] = {{"precision", report.micro_precision}, {"specificity", report.micro_specificity}};
  j["perfect_sites"] = report.perfect_sites;
  j["sites"] = nlohmann::json::array();
  for (const auto& r : report.sites) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : r.values) values.push_back(price_to_json(v));
    j["sites"].push_back({{"site", r.entry.site},
                          {"url", r.entry.url},
                          {"gold", price_to_json(r.entry.gold)},
                          {"fragments", r.fragment_count},
                          {"tp", r.score.tp},
                          {"fp", r.score.fp},
                          {"tn", r.score.tn},
                          {"fn", r.score.fn},
                          {"precision", r.score.precision},
                          {"precision_undefined", r.score.precision_undefined},
                          {"specificity", r.score.specificity},
                          {"values", values},
                          {"extraction_correct", r.extraction_correct}});
  }
  j["skipped"] = nlohmann::json::array();
  for (const auto& s : report.skipped) j["skipped"].push_back({{"site", s.site}, {"reason", s.reason}});
  j["audit"] = nlohmann::json::array();
  for (const auto& a : report.audit) {
    j["audit"].push_back({{"site", a.site},
                          {"offset", a.offset},
                          {"pre", a.pre},
                          {"value_text", a.value_text},
                          {"deleted_by", a.deleted_by ? nlohmann::json(*a.deleted_by) : nlohmann::json(nullptr)},
                          {"gold", a.gold},
                          {"decision", std::string(to_string(a.decision))}});
  }
  return j;
}

std::string report_table(const EvaluationReport& report) {
  std::ostringstream out;
  out << "# units: one decision per fragment (surviving gold = TP, surviving other = FP,\n"
         "#        discarded other = TN, discarded gold = FN)\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %5s %4s %4s %4s %4s %9s %11s  %s\n", "site", "frags", "tp", "fp", "tn",
                "fn", "precision", "specificity", "result");
  out << line;
  for (const auto& r : report.sites) {
    std::string result;
    for (std::size_t i = 0; i < r.values.size(); ++i) result += (i ? ", " : "") + r.values[i].str();
    if (result.empty()) result = "-";
    std::snprintf(line, sizeof line, "%-28s %5zu %4zu %4zu %4zu %4zu %8s%s %10s  %s\n", r.entry.site.c_str(),
                  r.fragment_count, r.score.tp, r.score.fp, r.score.tn, r.score.fn, pct(r.score.precision).c_str(),
                  r.score.precision_undefined ? "*" : " ", pct(r.score.specificity).c_str(), result.c_str());
    out << line;
  }
  out << "\nmacro precision " << pct(report.macro_precision) << "  macro specificity "
      << pct(report.macro_specificity) << "\n";
  out << "micro precision " << pct(report.micro_precision) << "  micro specificity "
      << pct(report.micro_specificity) << "\n";
  out << "perfect sites " << report.perfect_sites << "/" << report.sites.size() << "\n";
  if (std::any_of(report.sites.begin(), report.sites.end(), [](const SiteResult& r) { return r.score.precision_undefined; })) {
    out << "* precision undefined (no surviving fragment, gold discarded); counted as 0\n";
  }
  for (const auto& s : report.skipped) out << "skipped " << s.site << ": " << s.reason << "\n";
  return out.str();
}

}  // namespace wextractor
