#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace cobra::server {

class Hub;

class BindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HttpResponse {
  unsigned status = 200;
  std::string content_type;
  std::string body;
};

/// Serves a request path without touching the network: `/` is the page,
/// `/client/*` the embedded client assets, anything else a file below
/// `dir`. Paths are percent-decoded; a path that leaves `dir` is a 404.
HttpResponse serve_static(const std::string& target, const std::filesystem::path& dir,
                          const std::function<std::string()>& page);

/// Content type for a file name, by extension.
std::string content_type_for(const std::filesystem::path& path);

/// HTTP and WebSocket front end of a hub. WebSocket upgrades are accepted
/// at `/ws`; connections from a loopback address are presenters.
class HttpServer {
 public:
  HttpServer(Hub& hub, std::filesystem::path dir, std::function<std::string()> page,
             unsigned threads = 2);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Starts accepting on interface:port (port 0 picks a free one). Throws
  /// BindError with "address in use" when the port is taken.
  void listen(const std::string& interface, std::uint16_t port);

  /// Moves to a new address. Existing connections stay open. On failure
  /// the old address is kept and BindError is thrown.
  void rebind(const std::string& interface, std::uint16_t port);

  [[nodiscard]] std::uint16_t port() const;

  /// Stops accepting, closes connections and joins the worker threads.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cobra::server
