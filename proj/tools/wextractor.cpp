// Command-line front end over the engine and the price tracker.

#include <CLI11.hpp>

#include <unistd.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "wextractor/api_server.hpp"
#include "wextractor/errors.hpp"
#include "wextractor/evaluator.hpp"
#include "wextractor/fetch.hpp"
#include "wextractor/json_io.hpp"
#include "wextractor/store.hpp"

using namespace wextractor;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitError = 1;

int exit_code(OutcomeCode code) {
  switch (code) {
    case OutcomeCode::Ok: return 0;
    case OutcomeCode::NoPrice: return 2;
    case OutcomeCode::ManyPrices: return 3;
    case OutcomeCode::PageUnavailable: return 4;
  }
  return kExitError;
}

bool use_color() { return std::getenv("NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO); }

std::string paint(const std::string& text, const char* ansi) {
  if (!use_color()) return text;
  return std::string("\x1b[") + ansi + "m" + text + "\x1b[0m";
}

void print_outcome(const ExtractionOutcome& o) {
  switch (o.code) {
    case OutcomeCode::Ok:
      std::cout << paint(o.value->str(), "32") << "\n";
      break;
    case OutcomeCode::ManyPrices:
      std::cout << paint("MANY_PRICES", "33") << "\n";
      for (const auto& c : o.candidates) std::cout << "  " << c.str() << "\n";
      break;
    default:
      std::cout << paint(std::string(to_string(o.code)), "31") << "\n";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Settings {
  std::string store = "wextractor.store";
  std::string ruleset;
  std::string clues;
  double timeout = 15.0;
};

RuleSet load_rules(const Settings& s) {
  return load_discarding_rules(s.ruleset.empty() ? std::nullopt : std::optional<std::filesystem::path>(s.ruleset));
}

std::vector<Clue> load_clue_list(const Settings& s) {
  return load_clues(s.clues.empty() ? std::nullopt : std::optional<std::filesystem::path>(s.clues));
}

FetchOptions fetch_options(const Settings& s) {
  FetchOptions o;
  o.timeout = std::chrono::milliseconds(static_cast<long>(s.timeout * 1000.0));
  return o;
}

TrackerConfig tracker_config(const Settings& s) {
  TrackerConfig c;
  c.rules = load_rules(s);
  c.clues = load_clue_list(s);
  c.fetch = make_http_fetcher(fetch_options(s));
  return c;
}

ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wextractor - follow the price of product detail pages"};
  app.require_subcommand(1);
  Settings settings;
  app.add_option("--store", settings.store, "Store file")->envname("WEXTRACTOR_STORE");
  app.add_option("--ruleset", settings.ruleset, "Discarding ruleset file")->envname("WEXTRACTOR_RULESET");
  app.add_option("--clues", settings.clues, "Clue table file")->envname("WEXTRACTOR_CLUES");
  app.add_option("--timeout", settings.timeout, "Fetch timeout in seconds")
      ->envname("WEXTRACTOR_TIMEOUT")
      ->check(CLI::PositiveNumber);

  // extract
  auto* extract = app.add_subcommand("extract", "One-shot extraction from a file or url (no store)");
  std::string source;
  bool from_scratch_trace = false;
  bool json = false;
  std::string min_text, max_text;
  extract->add_option("source", source, "HTML file or http(s) url")->required();
  extract->add_flag("--from-scratch", from_scratch_trace, "Show fragments, rule decisions and the synthesized pattern");
  extract->add_option("--min", min_text, "Lower price limit (enables the threshold rule)");
  extract->add_option("--max", max_text, "Upper price limit (enables the threshold rule)");
  extract->add_flag("--json", json, "Emit the outcome as JSON");

  // track
  auto* track = app.add_subcommand("track", "Start following the price of a page");
  std::string track_url, track_html;
  track->add_option("url", track_url, "Page url")->required();
  track->add_option("--html", track_html, "Use this HTML file instead of fetching the page");
  track->add_flag("--json", json, "Emit JSON");

  // again
  auto* again = app.add_subcommand("again", "Find the price again");
  std::string again_id;
  bool again_all = false;
  double poll = 0.0;
  auto* id_opt = again->add_option("id", again_id, "Page id");
  auto* all_opt = again->add_flag("--all", again_all, "Every tracked page, one after another");
  id_opt->excludes(all_opt);
  again->add_option("--poll", poll, "Repeat every N seconds (default: off)")->check(CLI::NonNegativeNumber);
  again->add_flag("--json", json, "Emit JSON");

  auto* list = app.add_subcommand("list", "List tracked pages");
  list->add_flag("--json", json, "Emit JSON");

  auto* history = app.add_subcommand("history", "Price history of a page");
  std::string history_id;
  history->add_option("id", history_id, "Page id")->required();
  history->add_flag("--json", json, "Emit JSON");

  auto* kit = app.add_subcommand("kit", "Pointing patterns of a page");
  std::string kit_id;
  kit->add_option("id", kit_id, "Page id")->required();

  auto* serve = app.add_subcommand("serve", "Serve the HTTP/JSON API");
  std::string listen_addr = "127.0.0.1:8080";
  std::string ui_dir;
  serve->add_option("--listen", listen_addr, "host:port")->envname("WEXTRACTOR_LISTEN");
  serve->add_option("--ui", ui_dir, "Directory with the web UI, served under /ui/");

  auto* evaluate = app.add_subcommand("evaluate", "Score the extractor on an annotated corpus");
  std::string corpus_dir, report_path = "report.json";
  evaluate->add_option("corpus", corpus_dir, "Corpus directory")->required();
  evaluate->add_option("--report", report_path, "Where to write report.json");

  app.add_subcommand("replay", "Re-run every stored snapshot and compare with the stored outcomes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*extract) {
      RuleSet rules = load_rules(settings);
      if (!min_text.empty() || !max_text.empty()) {
        std::optional<Money> lo, hi;
        try {
          if (!min_text.empty()) lo = Money::from_decimal(min_text);
          if (!max_text.empty()) hi = Money::from_decimal(max_text);
        } catch (const ParseError& e) {
          std::cerr << "usage: " << e.what() << "\n";
          return kExitUsage;
        }
        set_threshold(rules, lo, hi);
      }
      auto clues = load_clue_list(settings);

      FetchResult page;
      if (parse_url(source)) {
        page = fetch_page(source, fetch_options(settings));
      } else {
        std::ifstream in(source, std::ios::binary);
        if (in) {
          std::ostringstream buf;
          buf << in.rdbuf();
          page.ok = true;
          page.status = 200;
          page.body = buf.str();
        } else {
          page.error = "cannot read " + source;
          std::cerr << page.error << "\n";
        }
      }

      ExtractionKit empty;
      empty.url = source;
      auto result = find_attribute_values(empty, page, rules, clues, now_utc());

      if (json) {
        std::cout << outcome_to_json(result.outcome).dump(2) << "\n";
      } else {
        if (from_scratch_trace && page.available()) {
          auto scratch = do_from_scratch_extraction(page.body, rules, clues, source);
          for (const auto& f : scratch.fragments) {
            std::cout << (f.deleted() ? "  discarded " : "  candidate ") << f.offset << " " << f.pre << " "
                      << f.value_text << " " << f.clue.currency_code;
            if (f.deleted()) std::cout << " (" << *f.deleted_by << ")";
            std::cout << "\n";
          }
          if (scratch.pattern) std::cout << "pattern: " << scratch.pattern->expression << "\n";
        }
        print_outcome(result.outcome);
      }
      return exit_code(result.outcome.code);
    }

    if (*evaluate) {
      auto report = evaluate_corpus(corpus_dir, load_rules(settings), load_clue_list(settings));
      std::cout << report_table(report);
      std::ofstream out(report_path);
      if (!out) throw std::runtime_error("cannot write " + report_path);
      out << report_to_json(report).dump(2) << "\n";
      return report.skipped.empty() ? 0 : kExitError;
    }

    PriceTracker tracker(settings.store, tracker_config(settings));

    if (*track) {
      std::optional<std::string> html;
      if (!track_html.empty()) html = read_file(track_html);
      TrackedPage page = tracker.add_page(track_url, html);
      const auto& outcome = page.history.back().outcome;
      if (json) {
        std::cout << nlohmann::json{{"id", page.id}, {"outcome", outcome_to_json(outcome)}}.dump(2) << "\n";
      } else {
        std::cout << page.id << " ";
        print_outcome(outcome);
      }
      return exit_code(outcome.code);
    }

    if (*again) {
      if (!again_all && again_id.empty()) {
        std::cerr << "again: give a page id or --all\n";
        return kExitUsage;
      }
      while (true) {
        std::vector<std::string> ids = again_all ? tracker.page_ids() : std::vector<std::string>{again_id};
        int rc = 0;
        for (const auto& id : ids) {
          auto outcome = tracker.find_again(id);
          if (json) {
            std::cout << nlohmann::json{{"id", id}, {"outcome", outcome_to_json(outcome)}}.dump() << "\n";
          } else {
            std::cout << id << " ";
            print_outcome(outcome);
          }
          if (!again_all) rc = exit_code(outcome.code);
        }
        if (poll <= 0.0) return rc;
        std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long>(poll * 1000.0)));
      }
    }

    if (*list) {
      auto pages = tracker.list_pages();
      if (json) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& s : pages) rows.push_back(summary_to_json(s));
        std::cout << rows.dump(2) << "\n";
        return 0;
      }
      for (const auto& s : pages) {
        std::string latest = "-";
        if (s.latest) latest = s.latest->value ? s.latest->value->str() : std::string(to_string(s.latest->code));
        std::cout << s.id << "\t" << latest << "\t" << (s.checked_at ? format_iso8601(*s.checked_at) : "-") << "\t"
                  << s.url << "\n";
      }
      return 0;
    }

    if (*history) {
      auto entries = tracker.get_history(history_id);
      if (json) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& e : entries) rows.push_back(history_row_to_json(e));
        std::cout << rows.dump(2) << "\n";
        return 0;
      }
      for (const auto& e : entries) {
        std::cout << format_iso8601(e.timestamp) << "\t" << to_string(e.outcome.code) << "\t"
                  << (e.outcome.value ? e.outcome.value->str() : "-") << "\t"
                  << (e.outcome.code == OutcomeCode::PageUnavailable ? "-" : e.outcome.from_scratch ? "from-scratch" : "pattern") << "\n";
      }
      return 0;
    }

    if (*kit) {
      for (const auto& pp : tracker.get_kit(kit_id).patterns) {
        std::cout << format_iso8601(pp.created_at) << "\t" << pp.expression << "\n";
      }
      return 0;
    }

    if (app.got_subcommand("replay")) {
      auto mismatches = tracker.verify_replay();
      for (const auto& m : mismatches) {
        std::cout << m.page_id << "#" << m.entry << "\n  stored:   " << m.stored << "\n  replayed: " << m.replayed
                  << "\n";
      }
      std::cout << (mismatches.empty() ? "all snapshots replay identically\n" : "replay mismatches found\n");
      return mismatches.empty() ? 0 : kExitError;
    }

    if (*serve) {
      auto colon = listen_addr.rfind(':');
      if (colon == std::string::npos) {
        std::cerr << "serve: --listen must be host:port\n";
        return kExitUsage;
      }
      std::string host = listen_addr.substr(0, colon);
      int port = 0;
      try {
        port = std::stoi(listen_addr.substr(colon + 1));
      } catch (const std::exception&) {
        std::cerr << "serve: bad port in " << listen_addr << "\n";
        return kExitUsage;
      }
      ApiServer server(tracker, ui_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(ui_dir));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << host << ":" << port << "\n";
      bool ok = server.listen(host, port);
      g_server = nullptr;
      if (!ok) {
        std::cerr << "serve: cannot listen on " << listen_addr << "\n";
        return kExitError;
      }
      return 0;
    }
  } catch (const NotFoundError& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  } catch (const ConflictError& e) {
    std::cerr << e.what() << " as " << e.existing_id() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
