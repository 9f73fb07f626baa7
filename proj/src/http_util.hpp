// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <optional>
#include <regex>
#include <string>
#include <string_view>

#include <httplib.h>

namespace pni::detail {

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;    // no trailing slash; may be empty
};

inline std::optional<UrlParts> split_url(const std::string& url) {
  static const std::regex pattern(R"(^(https?://[^/\s]+)(/\S*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern)) return std::nullopt;
  UrlParts parts{m[1].str(), m[2].str()};
  while (!parts.path.empty() && parts.path.back() == '/') parts.path.pop_back();
  return parts;
}

inline void set_timeouts(httplib::Client& client, double seconds) {
  const auto usec = std::chrono::microseconds(static_cast<std::int64_t>(seconds * 1e6));
  const auto sec = std::chrono::duration_cast<std::chrono::seconds>(usec);
  const auto rest = usec - sec;
  client.set_connection_timeout(sec.count(), rest.count());
  client.set_read_timeout(sec.count(), rest.count());
  client.set_write_timeout(sec.count(), rest.count());
}

inline std::string excerpt(std::string_view body, std::size_t limit = 200) {
  if (body.size() <= limit) return std::string(body);
  return std::string(body.substr(0, limit)) + "...";
}

}  // namespace pni::detail
