#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "wextractor/engine.hpp"

namespace wextractor {

struct FetchOptions {
  std::chrono::milliseconds timeout{15'000};
  std::size_t max_body = 5 * 1024 * 1024;
};

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string target;  // path plus query, never empty
};

/// Accepts absolute http(s) URLs with a host; nullopt otherwise.
std::optional<ParsedUrl> parse_url(std::string_view url);

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string to_valid_utf8(std::string_view bytes);

/// One GET, following up to five redirects. Transport failures come back with
/// ok = false; oversized bodies are cut at max_body with truncated = true.
FetchResult fetch_page(const std::string& url, const FetchOptions& options = {});

PageFetcher make_http_fetcher(FetchOptions options = {});

}  // namespace wextractor
