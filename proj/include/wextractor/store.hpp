#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "wextractor/engine.hpp"

namespace wextractor {

/// Page body captured by an extraction attempt.
struct Snapshot {
  Timestamp fetched_at{};
  int http_status = 0;
  std::string html;
  bool truncated = false;

  bool operator==(const Snapshot&) const = default;
};

struct HistoryEntry {
  Timestamp timestamp{};
  ExtractionOutcome outcome;
  std::optional<Snapshot> snapshot;

  bool operator==(const HistoryEntry&) const = default;
};

struct TrackedPage {
  std::string id;
  std::string url;
  std::optional<std::string> title;
  ExtractionKit kit;
  std::vector<HistoryEntry> history;
  Timestamp created_at{};
};

struct PageSummary {
  std::string id;
  std::string url;
  std::optional<std::string> title;
  std::optional<ExtractionOutcome> latest;
  std::optional<Timestamp> checked_at;
};

/// Append-only JSON-lines file. Every append is flushed to disk before it
/// returns. On open, a torn trailing record is cut off.
class Journal {
 public:
  explicit Journal(std::filesystem::path path);
  ~Journal();
  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  /// Records that survived the last run, oldest first.
  const std::vector<nlohmann::json>& recovered() const { return recovered_; }
  /// Bytes dropped from a torn tail when the file was opened.
  std::size_t discarded_bytes() const { return discarded_; }

  void append(const nlohmann::json& record);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::mutex mu_;
  std::vector<nlohmann::json> recovered_;
  std::size_t discarded_ = 0;
};

struct TrackerConfig {
  RuleSet rules = default_ruleset();
  std::vector<Clue> clues = default_clues();
  PageFetcher fetch;
  Clock clock = now_utc;
};

/// Tracked pages with their kits and histories, persisted in a
/// single journal file. Safe for concurrent use: operations on one page are
/// serialized, different pages proceed in parallel.
class PriceTracker {
 public:
  PriceTracker(const std::filesystem::path& store_path, TrackerConfig config);
  ~PriceTracker();

  /// Starts tracking `url`. `inline_html` stands in for fetching the page.
  /// Throws ValidationError for a malformed url and ConflictError when the url
  /// is already tracked.
  TrackedPage add_page(const std::string& url, const std::optional<std::string>& inline_html = std::nullopt);

  /// Re-extracts with the stored kit. Throws NotFoundError.
  ExtractionOutcome find_again(const std::string& page_id);

  std::vector<PageSummary> list_pages() const;
  std::vector<HistoryEntry> get_history(const std::string& page_id) const;
  ExtractionKit get_kit(const std::string& page_id) const;
  TrackedPage get_page(const std::string& page_id) const;
  std::vector<std::string> page_ids() const;

  struct ReplayMismatch {
    std::string page_id;
    std::size_t entry = 0;
    std::string stored;
    std::string replayed;
  };

  /// Re-runs the engine over every stored snapshot in order and reports any
  /// outcome that differs from the recorded one.
  std::vector<ReplayMismatch> verify_replay() const;

  const std::filesystem::path& store_path() const;

 private:
  struct Slot;

  Slot& slot(const std::string& page_id) const;
  HistoryEntry run_extraction(ExtractionKit& kit, const std::optional<std::string>& inline_html);
  void load();

  TrackerConfig config_;
  std::unique_ptr<Journal> journal_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
  std::vector<std::string> order_;
  std::map<std::string, std::string> by_url_;
  std::map<std::string, std::string> pending_urls_;
  std::size_t next_id_ = 1;
};

/// Text of the first <title> element, whitespace collapsed.
std::optional<std::string> extract_title(std::string_view html);

nlohmann::json history_entry_to_json(const HistoryEntry& e, bool with_snapshot);
HistoryEntry history_entry_from_json(const nlohmann::json& j);

}  // namespace wextractor
