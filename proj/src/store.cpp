#include "wextractor/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wextractor/errors.hpp"
#include "wextractor/fetch.hpp"
#include "wextractor/html_scan.hpp"
#include "wextractor/json_io.hpp"

namespace wextractor {

namespace {

std::runtime_error sys_error(const std::string& what) {
  return std::runtime_error(what + ": " + std::strerror(errno));
}

}  // namespace

// ---------------------------------------------------------------- Journal

Journal::Journal(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw sys_error("cannot open store " + path_.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    throw std::runtime_error("store " + path_.string() + " is in use by another process");
  }

  std::string content;
  {
    std::ifstream in(path_, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    content = buf.str();
  }

  std::size_t pos = 0;
  std::size_t good_end = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    ++line_no;
    auto nl = content.find('\n', pos);
    bool last = nl == std::string::npos || nl + 1 == content.size();
    std::string_view line(content.data() + pos, (nl == std::string::npos ? content.size() : nl) - pos);
    nlohmann::json record;
    bool ok = nl != std::string::npos;
    if (ok) {
      try {
        record = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        ok = false;
      }
    }
    if (!ok) {
      if (!last) throw std::runtime_error("store " + path_.string() + " is corrupt at record " + std::to_string(line_no));
      break;
    }
    recovered_.push_back(std::move(record));
    pos = nl + 1;
    good_end = pos;
  }

  if (good_end < content.size()) {
    discarded_ = content.size() - good_end;
    if (::ftruncate(fd_, static_cast<off_t>(good_end)) != 0) throw sys_error("cannot truncate " + path_.string());
    ::fdatasync(fd_);
  }
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

void Journal::append(const nlohmann::json& record) {
  std::string line = record.dump() + "\n";
  std::lock_guard lock(mu_);
  const char* p = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw sys_error("write to " + path_.string() + " failed");
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0) throw sys_error("fdatasync on " + path_.string() + " failed");
}

// ---------------------------------------------------------------- JSON

nlohmann::json history_entry_to_json(const HistoryEntry& e, bool with_snapshot) {
  nlohmann::json j{{"timestamp", format_iso8601(e.timestamp)}, {"outcome", outcome_to_json(e.outcome)}};
  if (with_snapshot && e.snapshot) {
    j["snapshot"] = {{"fetched_at", format_iso8601(e.snapshot->fetched_at)},
                     {"status", e.snapshot->http_status},
                     {"truncated", e.snapshot->truncated},
                     {"html", e.snapshot->html}};
  }
  return j;
}

HistoryEntry history_entry_from_json(const nlohmann::json& j) {
  HistoryEntry e;
  e.timestamp = parse_iso8601(j.at("timestamp").get<std::string>());
  e.outcome = outcome_from_json(j.at("outcome"));
  if (j.contains("snapshot")) {
    const auto& s = j["snapshot"];
    e.snapshot = Snapshot{parse_iso8601(s.at("fetched_at").get<std::string>()), s.at("status").get<int>(),
                          s.at("html").get<std::string>(), s.value("truncated", false)};
  }
  return e;
}

std::optional<std::string> extract_title(std::string_view html) {
  for (const auto& tag : html::scan_tags(html)) {
    if (tag.kind != html::TagKind::Start || tag.name != "title") continue;
    std::string lower = html::to_lower(html.substr(tag.end));
    auto close = lower.find("</title");
    if (close == std::string::npos) return std::nullopt;
    std::string title;
    bool space = false;
    for (char c : html.substr(tag.end, close)) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = !title.empty();
      } else {
        if (space) title += ' ';
        title += c;
        space = false;
      }
    }
    if (title.empty()) return std::nullopt;
    return title;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- PriceTracker

struct PriceTracker::Slot {
  std::mutex op_mu;                  // serializes operations on this page
  mutable std::shared_mutex data_mu;  // guards `page`
  TrackedPage page;
};

PriceTracker::PriceTracker(const std::filesystem::path& store_path, TrackerConfig config)
    : config_(std::move(config)), journal_(std::make_unique<Journal>(store_path)) {
  if (!config_.fetch) config_.fetch = make_http_fetcher();
  if (!config_.clock) config_.clock = now_utc;
  load();
}

PriceTracker::~PriceTracker() = default;

const std::filesystem::path& PriceTracker::store_path() const { return journal_->path(); }

void PriceTracker::load() {
  std::size_t record_no = 0;
  for (const auto& rec : journal_->recovered()) {
    ++record_no;
    try {
      const std::string type = rec.at("type").get<std::string>();
      if (type == "page") {
        auto s = std::make_unique<Slot>();
        TrackedPage& p = s->page;
        p.id = rec.at("id").get<std::string>();
        p.url = rec.at("url").get<std::string>();
        if (rec.contains("title")) p.title = rec["title"].get<std::string>();
        p.created_at = parse_iso8601(rec.at("created_at").get<std::string>());
        p.kit.url = p.url;
        if (rec.contains("entry")) {
          HistoryEntry e = history_entry_from_json(rec["entry"]);
          if (e.outcome.new_pattern) p.kit.add(*e.outcome.new_pattern);
          p.history.push_back(std::move(e));
        }
        by_url_[p.url] = p.id;
        order_.push_back(p.id);
        if (p.id.size() > 1 && p.id[0] == 'p') {
          try {
            next_id_ = std::max(next_id_, static_cast<std::size_t>(std::stoull(p.id.substr(1))) + 1);
          } catch (const std::exception&) {
          }
        }
        slots_[p.id] = std::move(s);
      } else if (type == "extract") {
        auto it = slots_.find(rec.at("page").get<std::string>());
        if (it == slots_.end()) throw std::runtime_error("extraction for unknown page");
        TrackedPage& p = it->second->page;
        HistoryEntry e = history_entry_from_json(rec.at("entry"));
        if (e.outcome.new_pattern) p.kit.add(*e.outcome.new_pattern);
        p.history.push_back(std::move(e));
      } else {
        throw std::runtime_error("unknown record type " + type);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("store " + journal_->path().string() + " record " + std::to_string(record_no) + ": " +
                               e.what());
    }
  }
}

PriceTracker::Slot& PriceTracker::slot(const std::string& page_id) const {
  std::shared_lock lock(mu_);
  auto it = slots_.find(page_id);
  if (it == slots_.end()) throw NotFoundError("page " + page_id + " not found");
  return *it->second;
}

HistoryEntry PriceTracker::run_extraction(ExtractionKit& kit, const std::optional<std::string>& inline_html) {
  const Timestamp now = config_.clock();
  FetchResult page;
  if (inline_html) {
    page.ok = true;
    page.status = 200;
    page.body = *inline_html;
  } else {
    page = config_.fetch(kit.url);
  }

  HistoryEntry entry;
  entry.timestamp = now;
  if (page.ok) entry.snapshot = Snapshot{now, page.status, page.body, page.truncated};
  auto result = find_attribute_values(kit, page, config_.rules, config_.clues, now);
  entry.outcome = std::move(result.outcome);
  kit = std::move(result.kit);
  return entry;
}

TrackedPage PriceTracker::add_page(const std::string& url, const std::optional<std::string>& inline_html) {
  if (!parse_url(url)) throw ValidationError("invalid url \"" + url + "\"");

  std::string id;
  {
    std::unique_lock lock(mu_);
    if (auto it = by_url_.find(url); it != by_url_.end()) throw ConflictError("url already tracked", it->second);
    if (auto it = pending_urls_.find(url); it != pending_urls_.end()) {
      throw ConflictError("url already tracked", it->second);
    }
    id = "p" + std::to_string(next_id_++);
    pending_urls_[url] = id;
  }

  auto s = std::make_unique<Slot>();
  TrackedPage& page = s->page;
  try {
    page.id = id;
    page.url = url;
    page.created_at = config_.clock();
    page.kit.url = url;
    HistoryEntry entry = run_extraction(page.kit, inline_html);
    if (entry.snapshot) page.title = extract_title(entry.snapshot->html);

    nlohmann::json rec{{"type", "page"},
                       {"id", id},
                       {"url", url},
                       {"created_at", format_iso8601(page.created_at)},
                       {"entry", history_entry_to_json(entry, true)}};
    if (page.title) rec["title"] = *page.title;
    journal_->append(rec);
    page.history.push_back(std::move(entry));
  } catch (...) {
    std::unique_lock lock(mu_);
    pending_urls_.erase(url);
    throw;
  }

  TrackedPage copy = page;
  std::unique_lock lock(mu_);
  pending_urls_.erase(url);
  by_url_[url] = id;
  order_.push_back(id);
  slots_[id] = std::move(s);
  return copy;
}

ExtractionOutcome PriceTracker::find_again(const std::string& page_id) {
  Slot& s = slot(page_id);
  std::lock_guard op(s.op_mu);

  ExtractionKit kit;
  {
    std::shared_lock read(s.data_mu);
    kit = s.page.kit;
  }
  HistoryEntry entry = run_extraction(kit, std::nullopt);
  journal_->append({{"type", "extract"}, {"page", page_id}, {"entry", history_entry_to_json(entry, true)}});

  std::unique_lock write(s.data_mu);
  s.page.kit = std::move(kit);
  s.page.history.push_back(entry);
  return entry.outcome;
}

std::vector<PageSummary> PriceTracker::list_pages() const {
  std::shared_lock lock(mu_);
  std::vector<PageSummary> out;
  for (const auto& id : order_) {
    const Slot& s = *slots_.at(id);
    std::shared_lock read(s.data_mu);
    PageSummary summary{s.page.id, s.page.url, s.page.title, std::nullopt, std::nullopt};
    if (!s.page.history.empty()) {
      summary.latest = s.page.history.back().outcome;
      summary.checked_at = s.page.history.back().timestamp;
    }
    out.push_back(std::move(summary));
  }
  return out;
}

std::vector<HistoryEntry> PriceTracker::get_history(const std::string& page_id) const {
  const Slot& s = slot(page_id);
  std::shared_lock read(s.data_mu);
  return s.page.history;
}

ExtractionKit PriceTracker::get_kit(const std::string& page_id) const {
  const Slot& s = slot(page_id);
  std::shared_lock read(s.data_mu);
  return s.page.kit;
}

TrackedPage PriceTracker::get_page(const std::string& page_id) const {
  const Slot& s = slot(page_id);
  std::shared_lock read(s.data_mu);
  return s.page;
}

std::vector<std::string> PriceTracker::page_ids() const {
  std::shared_lock lock(mu_);
  return order_;
}

std::vector<PriceTracker::ReplayMismatch> PriceTracker::verify_replay() const {
  std::vector<ReplayMismatch> mismatches;
  for (const auto& id : page_ids()) {
    TrackedPage page = get_page(id);
    ExtractionKit kit;
    kit.url = page.url;
    for (std::size_t i = 0; i < page.history.size(); ++i) {
      const HistoryEntry& e = page.history[i];
      FetchResult fetched;
      if (e.snapshot) {
        fetched.ok = true;
        fetched.status = e.snapshot->http_status;
        fetched.body = e.snapshot->html;
        fetched.truncated = e.snapshot->truncated;
      }
      auto result = find_attribute_values(kit, fetched, config_.rules, config_.clues, e.timestamp);
      std::string stored = outcome_to_json(e.outcome).dump();
      std::string replayed = outcome_to_json(result.outcome).dump();
      if (stored != replayed) mismatches.push_back({id, i, stored, replayed});
      kit = std::move(result.kit);
    }
  }
  return mismatches;
}

}  // namespace wextractor
