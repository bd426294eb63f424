#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

namespace wextractor {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Clock = std::function<Timestamp()>;

Timestamp now_utc();

/// "2017-05-04T10:21:07.250Z"
std::string format_iso8601(Timestamp t);

/// Accepts the format produced by format_iso8601, with or without milliseconds.
/// Throws std::invalid_argument on anything else.
Timestamp parse_iso8601(std::string_view text);

}  // namespace wextractor
