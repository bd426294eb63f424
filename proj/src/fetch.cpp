#include "wextractor/fetch.hpp"

#include <httplib.h>

#include <cctype>

namespace wextractor {

std::optional<ParsedUrl> parse_url(std::string_view url) {
  ParsedUrl out;
  auto sep = url.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  std::string scheme(url.substr(0, sep));
  for (auto& c : scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (scheme != "http" && scheme != "https") return std::nullopt;
  out.scheme = scheme;

  std::string_view rest = url.substr(sep + 3);
  auto host_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, host_end);
  if (authority.empty() || authority.find('@') != std::string_view::npos) return std::nullopt;
  for (char c : authority) {
    if (std::isspace(static_cast<unsigned char>(c))) return std::nullopt;
  }

  out.port = scheme == "https" ? 443 : 80;
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    std::string_view port = authority.substr(colon + 1);
    if (port.empty() || port.size() > 5) return std::nullopt;
    int value = 0;
    for (char c : port) {
      if (c < '0' || c > '9') return std::nullopt;
      value = value * 10 + (c - '0');
    }
    if (value == 0 || value > 65535) return std::nullopt;
    out.port = value;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  out.host = std::string(authority);

  std::string target = host_end == std::string_view::npos ? "" : std::string(rest.substr(host_end));
  if (auto hash = target.find('#'); hash != std::string::npos) target.erase(hash);
  if (target.empty() || target.front() == '?') target.insert(0, "/");
  out.target = target;
  return out;
}

std::string to_valid_utf8(std::string_view in) {
  // Well-formed sequences per the Unicode byte table; each maximal ill-formed
  // subpart becomes one U+FFFD.
  std::string out;
  out.reserve(in.size());
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(in[k]); };
  std::size_t i = 0;
  while (i < in.size()) {
    const unsigned char c = byte(i);
    if (c < 0x80) {
      out += static_cast<char>(c);
      ++i;
      continue;
    }
    std::size_t len = 0;
    unsigned char lo = 0x80, hi = 0xBF;  // bounds for the second byte
    if (c >= 0xC2 && c <= 0xDF) {
      len = 2;
    } else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
      if (c == 0xE0) lo = 0xA0;
      if (c == 0xED) hi = 0x9F;
    } else if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
      if (c == 0xF0) lo = 0x90;
      if (c == 0xF4) hi = 0x8F;
    }
    std::size_t good = len ? 1 : 0;
    while (good > 0 && good < len && i + good < in.size()) {
      const unsigned char b = byte(i + good);
      const bool fits = good == 1 ? (b >= lo && b <= hi) : (b & 0xC0) == 0x80;
      if (!fits) break;
      ++good;
    }
    if (len && good == len) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out += "\xEF\xBF\xBD";
      i += good ? good : 1;
    }
  }
  return out;
}

FetchResult fetch_page(const std::string& url, const FetchOptions& options) {
  FetchResult result;
  auto parsed = parse_url(url);
  if (!parsed) {
    result.error = "invalid url";
    return result;
  }

  httplib::Client client(parsed->scheme + "://" + parsed->host + ":" + std::to_string(parsed->port));
  client.set_follow_location(true);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  std::string body;
  int status = 0;
  bool truncated = false;
  httplib::Headers headers{{"User-Agent", "wextractor/1.0"}, {"Accept", "text/html,*/*"}};
  auto res = client.Get(
      parsed->target, headers,
      [&](const httplib::Response& r) {
        status = r.status;
        return true;
      },
      [&](const char* data, std::size_t len) {
        std::size_t room = options.max_body - body.size();
        body.append(data, std::min(len, room));
        if (len > room) {
          truncated = true;
          return false;
        }
        return true;
      });

  if (!res && !(truncated && status > 0)) {
    result.error = httplib::to_string(res.error());
    return result;
  }
  result.ok = true;
  result.status = res ? res->status : status;
  result.truncated = truncated;
  result.body = to_valid_utf8(body);
  return result;
}

PageFetcher make_http_fetcher(FetchOptions options) {
  return [options](const std::string& url) { return fetch_page(url, options); };
}

}  // namespace wextractor
