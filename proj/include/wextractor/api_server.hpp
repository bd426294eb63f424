#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "wextractor/store.hpp"

namespace wextractor {

/// JSON row served by GET /pages.
nlohmann::json summary_to_json(const PageSummary& s);
/// JSON row served by GET /pages/{id}/history.
nlohmann::json history_row_to_json(const HistoryEntry& e);

/// HTTP/JSON front end over a PriceTracker:
///   POST /pages                 {url, html?} -> 201 {id, outcome} | 409
///   POST /pages/{id}/extract    -> 200 {outcome}
///   GET  /pages                 -> 200 [{id, url, latest_outcome, latest_value, checked_at}]
///   GET  /pages/{id}/history    -> 200 [{timestamp, code, value?, from_scratch}]
///   GET  /pages/{id}/kit        -> 200 [{expression, created_at}]
/// Static files under /ui/ when a directory is given.
class ApiServer {
 public:
  explicit ApiServer(PriceTracker& tracker, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds and serves until stop(); returns false if binding fails.
  bool listen(const std::string& host, int port);

  /// Binds to an ephemeral port and returns it (or -1); follow with serve().
  int bind_any_port(const std::string& host);
  bool serve();

  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wextractor
