#pragma once

// HTTP JSON API over a SessionRegistry.

#include <optional>
#include <string>
#include <string_view>

#include "mcda/session.hpp"

namespace httplib {
class Server;
}

namespace mcda {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// "host:port", ":port" or "port".
BindAddress parse_bind(std::string_view text);
/// The flag wins over the environment value; both absent gives the default.
BindAddress choose_bind(const std::optional<std::string>& flag, const char* env_value);

/// Errors are returned as {"error": {"code", "message"}} with code one of
/// bad-request, not-found, conflict, unprocessable.
void install_routes(httplib::Server& server, SessionRegistry& registry);

}  // namespace mcda
