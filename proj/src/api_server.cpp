#include "wextractor/api_server.hpp"

#include <httplib.h>

#include "wextractor/errors.hpp"
#include "wextractor/json_io.hpp"

namespace wextractor {
namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

// Maps service exceptions onto status codes.
template <typename F>
void guarded(httplib::Response& res, F&& handler) {
  try {
    handler();
  } catch (const NotFoundError& e) {
    send_error(res, 404, e.what());
  } catch (const ConflictError& e) {
    send_json(res, 409, {{"error", e.what()}, {"id", e.existing_id()}});
  } catch (const ValidationError& e) {
    send_error(res, 400, e.what());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, 400, std::string("bad request body: ") + e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

nlohmann::json summary_to_json(const PageSummary& s) {
  nlohmann::json j{{"id", s.id}, {"url", s.url}};
  j["title"] = s.title ? nlohmann::json(*s.title) : nlohmann::json(nullptr);
  j["latest_outcome"] = s.latest ? outcome_to_json(*s.latest) : nlohmann::json(nullptr);
  j["latest_value"] = s.latest && s.latest->value ? price_to_json(*s.latest->value) : nlohmann::json(nullptr);
  j["checked_at"] = s.checked_at ? nlohmann::json(format_iso8601(*s.checked_at)) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json history_row_to_json(const HistoryEntry& e) {
  nlohmann::json j{{"timestamp", format_iso8601(e.timestamp)},
                   {"code", std::string(to_string(e.outcome.code))},
                   {"from_scratch", e.outcome.from_scratch}};
  if (e.outcome.value) j["value"] = price_to_json(*e.outcome.value);
  if (!e.outcome.candidates.empty()) {
    j["candidates"] = nlohmann::json::array();
    for (const auto& c : e.outcome.candidates) j["candidates"].push_back(price_to_json(c));
  }
  return j;
}

struct ApiServer::Impl {
  explicit Impl(PriceTracker& t) : tracker(t) {}
  PriceTracker& tracker;
  httplib::Server server;
};

ApiServer::ApiServer(PriceTracker& tracker, std::optional<std::filesystem::path> ui_dir)
    : impl_(std::make_unique<Impl>(tracker)) {
  auto& srv = impl_->server;
  PriceTracker& t = impl_->tracker;

  srv.Post("/pages", [&t](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto body = nlohmann::json::parse(req.body);
      if (!body.is_object() || !body.contains("url") || !body["url"].is_string()) {
        throw ValidationError("body must be an object with a string \"url\"");
      }
      std::optional<std::string> html;
      if (body.contains("html") && !body["html"].is_null()) html = body["html"].get<std::string>();
      TrackedPage page = t.add_page(body["url"].get<std::string>(), html);
      send_json(res, 201, {{"id", page.id}, {"outcome", outcome_to_json(page.history.back().outcome)}});
    });
  });

  srv.Post("/pages/:id/extract", [&t](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      ExtractionOutcome outcome = t.find_again(req.path_params.at("id"));
      send_json(res, 200, {{"outcome", outcome_to_json(outcome)}});
    });
  });

  srv.Get("/pages", [&t](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& s : t.list_pages()) rows.push_back(summary_to_json(s));
      send_json(res, 200, rows);
    });
  });

  srv.Get("/pages/:id/history", [&t](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& e : t.get_history(req.path_params.at("id"))) rows.push_back(history_row_to_json(e));
      send_json(res, 200, rows);
    });
  });

  srv.Get("/pages/:id/kit", [&t](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& pp : t.get_kit(req.path_params.at("id")).patterns) {
        rows.push_back({{"expression", pp.expression},
                        {"created_at", format_iso8601(pp.created_at)},
                        {"currency", pp.currency_code}});
      }
      send_json(res, 200, rows);
    });
  });

  if (ui_dir && std::filesystem::is_directory(*ui_dir)) {
    srv.set_mount_point("/ui", ui_dir->string());
  }
}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int ApiServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool ApiServer::serve() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace wextractor
