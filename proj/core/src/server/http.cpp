#include "cobra/server/http.hpp"

#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "cobra/assets.hpp"
#include "cobra/server/hub.hpp"

namespace cobra::server {

namespace fs = std::filesystem;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

std::optional<std::string> percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) return std::nullopt;
    int v = 0;
    for (int k = 1; k <= 2; ++k) {
      const char c = s[i + k];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= c - '0';
      else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
      else return std::nullopt;
    }
    out += static_cast<char>(v);
    i += 2;
  }
  return out;
}

HttpResponse not_found() { return {404, "text/plain; charset=utf-8", "not found\n"}; }

bool inside(const fs::path& base, const fs::path& p) {
  auto b = base.begin();
  auto q = p.begin();
  for (; b != base.end(); ++b, ++q) {
    if (b->empty() && std::next(b) == base.end()) break;  // trailing separator
    if (q == p.end() || *b != *q) return false;
  }
  return true;
}

}  // namespace

std::string content_type_for(const fs::path& path) {
  static const std::map<std::string, std::string> kTypes = {
      {".html", "text/html; charset=utf-8"}, {".htm", "text/html; charset=utf-8"},
      {".css", "text/css; charset=utf-8"},   {".js", "text/javascript; charset=utf-8"},
      {".json", "application/json"},         {".png", "image/png"},
      {".jpg", "image/jpeg"},                {".jpeg", "image/jpeg"},
      {".gif", "image/gif"},                 {".svg", "image/svg+xml"},
      {".ico", "image/x-icon"},              {".webp", "image/webp"},
      {".woff", "font/woff"},                {".woff2", "font/woff2"},
      {".ttf", "font/ttf"},                  {".pdf", "application/pdf"},
      {".txt", "text/plain; charset=utf-8"}, {".conf", "text/plain; charset=utf-8"},
      {".thy", "text/plain; charset=utf-8"}, {".scala", "text/plain; charset=utf-8"},
      {".hs", "text/plain; charset=utf-8"},  {".demo", "text/plain; charset=utf-8"},
  };
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto it = kTypes.find(ext);
  return it == kTypes.end() ? "application/octet-stream" : it->second;
}

HttpResponse serve_static(const std::string& target, const fs::path& dir,
                          const std::function<std::string()>& page) {
  std::string_view raw = target;
  raw = raw.substr(0, raw.find_first_of("?#"));
  const auto path = percent_decode(raw);
  if (!path || path->empty() || (*path)[0] != '/' || path->find('\0') != std::string::npos) {
    return not_found();
  }
  if (*path == "/") return {200, "text/html; charset=utf-8", page()};
  if (path->rfind("/client/", 0) == 0) {
    const std::string name = path->substr(1);
    if (name.find("..") != std::string::npos) return not_found();
    const auto asset = embedded_asset(name);
    if (!asset) return not_found();
    return {200, content_type_for(name), std::string(*asset)};
  }
  const fs::path rel = fs::path(path->substr(1)).lexically_normal();
  for (const auto& part : rel) {
    if (part == "..") return not_found();
  }
  std::error_code ec;
  const fs::path base = fs::weakly_canonical(dir, ec);
  if (ec) return not_found();
  const fs::path full = fs::weakly_canonical(base / rel, ec);
  if (ec || !inside(base, full) || !fs::is_regular_file(full, ec)) return not_found();
  std::ifstream in(full, std::ios::binary);
  if (!in) return not_found();
  std::ostringstream ss;
  ss << in.rdbuf();
  return {200, content_type_for(full), ss.str()};
}

namespace {

struct Registry {
  std::mutex mutex;
  std::map<sync::ClientId, std::weak_ptr<Connection>> live;
};

class WsSession : public Connection, public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Hub& hub, std::shared_ptr<Registry> registry)
      : ws_(std::move(socket)), hub_(hub), registry_(std::move(registry)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.binary(true);
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void send(wire::Bytes frame) override {
    asio::post(ws_.get_executor(), [self = shared_from_this(), f = std::move(frame)]() mutable {
      self->queue_.push_back(std::move(f));
      if (self->queue_.size() == 1) self->write_next();
    });
  }

  void close() override {
    asio::post(ws_.get_executor(), [self = shared_from_this()] {
      self->closing_ = true;
      if (self->queue_.empty()) self->do_close();
    });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    beast::error_code ep_ec;
    const auto remote = beast::get_lowest_layer(ws_).socket().remote_endpoint(ep_ec);
    const bool presenter = !ep_ec && remote.address().is_loopback();
    id_ = hub_.connect(shared_from_this(), presenter);
    {
      std::lock_guard lock(registry_->mutex);
      registry_->live[id_] = weak_from_this();
    }
    read_next();
  }

  void read_next() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      finish();
      return;
    }
    const auto data = buffer_.cdata();
    if (ws_.got_binary()) {
      hub_.receive(id_, std::span(static_cast<const std::uint8_t*>(data.data()), data.size()));
    } else {
      hub_.handle(id_, wire::Error{wire::codes::kBadMessage, "text frames are not supported"});
    }
    buffer_.consume(buffer_.size());
    read_next();
  }

  void write_next() {
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_write(ec); });
  }

  void on_write(beast::error_code ec) {
    if (ec) {
      queue_.clear();
      finish();
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) {
      write_next();
    } else if (closing_) {
      do_close();
    }
  }

  void do_close() {
    if (close_sent_) return;
    close_sent_ = true;
    ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
  }

  void finish() {
    if (id_ == 0) return;
    hub_.disconnect(id_);
    std::lock_guard lock(registry_->mutex);
    registry_->live.erase(id_);
  }

  websocket::stream<beast::tcp_stream> ws_;
  Hub& hub_;
  std::shared_ptr<Registry> registry_;
  beast::flat_buffer buffer_;
  std::deque<wire::Bytes> queue_;
  sync::ClientId id_ = 0;
  bool closing_ = false;
  bool close_sent_ = false;
};

struct Shared {
  Hub& hub;
  fs::path dir;
  std::function<std::string()> page;
  std::shared_ptr<Registry> registry;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, std::shared_ptr<Shared> shared)
      : stream_(std::move(socket)), shared_(std::move(shared)) {}

  void run() {
    asio::dispatch(stream_.get_executor(), [self = shared_from_this()] { self->read_next(); });
  }

 private:
  void read_next() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      beast::error_code ignored;
      stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
      return;
    }
    const std::string target(req_.target());
    if (websocket::is_upgrade(req_)) {
      if (target.substr(0, target.find('?')) == "/ws") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), shared_->hub, shared_->registry)
            ->run(std::move(req_));
        return;
      }
    }
    auto res = std::make_shared<http::response<http::string_body>>();
    res->version(req_.version());
    res->set(http::field::server, "cobra");
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      res->result(http::status::method_not_allowed);
      res->set(http::field::content_type, "text/plain; charset=utf-8");
      res->set(http::field::allow, "GET, HEAD");
      res->body() = "method not allowed\n";
    } else {
      HttpResponse r;
      try {
        r = serve_static(target, shared_->dir, shared_->page);
      } catch (const std::exception& e) {
        r = {500, "text/plain; charset=utf-8", std::string(e.what()) + "\n"};
      }
      res->result(r.status);
      res->set(http::field::content_type, r.content_type);
      res->set(http::field::cache_control, "no-cache");
      if (req_.method() == http::verb::get) res->body() = std::move(r.body);
      else res->content_length(r.body.size());
    }
    res->keep_alive(req_.keep_alive());
    if (req_.method() != http::verb::head) res->prepare_payload();
    const bool close = res->need_eof();
    http::async_write(stream_, *res, [self = shared_from_this(), res, close](beast::error_code ec, std::size_t) {
      if (ec || close) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      self->read_next();
    });
  }

  beast::tcp_stream stream_;
  std::shared_ptr<Shared> shared_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

class Listener : public std::enable_shared_from_this<Listener> {
 public:
  Listener(asio::io_context& ioc, tcp::acceptor acceptor, std::shared_ptr<Shared> shared)
      : ioc_(ioc), acceptor_(std::move(acceptor)), shared_(std::move(shared)) {}

  void start() {
    asio::dispatch(acceptor_.get_executor(), [self = shared_from_this()] { self->accept_next(); });
  }

  void stop() {
    asio::post(acceptor_.get_executor(), [self = shared_from_this()] {
      beast::error_code ignored;
      self->acceptor_.close(ignored);
    });
  }

  [[nodiscard]] std::uint16_t port() const { return acceptor_.local_endpoint().port(); }

 private:
  void accept_next() {
    acceptor_.async_accept(asio::make_strand(ioc_), [self = shared_from_this()](beast::error_code ec,
                                                                                tcp::socket socket) {
      if (ec == asio::error::operation_aborted || !self->acceptor_.is_open()) return;
      if (!ec) std::make_shared<HttpSession>(std::move(socket), self->shared_)->run();
      self->accept_next();
    });
  }

  asio::io_context& ioc_;
  tcp::acceptor acceptor_;
  std::shared_ptr<Shared> shared_;
};

tcp::endpoint resolve(asio::io_context& ioc, const std::string& interface, std::uint16_t port) {
  beast::error_code ec;
  const auto addr = asio::ip::make_address(interface, ec);
  if (!ec) return {addr, port};
  tcp::resolver resolver(ioc);
  const auto results = resolver.resolve(interface, std::to_string(port), ec);
  if (ec || results.empty()) throw BindError("cannot resolve interface '" + interface + "'");
  // Browsers try IPv4 first for "localhost" on most systems.
  for (const auto& r : results) {
    if (r.endpoint().address().is_v4()) return r.endpoint();
  }
  return results.begin()->endpoint();
}

tcp::acceptor open_acceptor(asio::io_context& ioc, const std::string& interface, std::uint16_t port) {
  const tcp::endpoint ep = resolve(ioc, interface, port);
  tcp::acceptor acceptor(asio::make_strand(ioc));
  beast::error_code ec;
  acceptor.open(ep.protocol(), ec);
  if (!ec) acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(ep, ec);
  if (ec == asio::error::address_in_use) {
    throw BindError("address in use: " + interface + ":" + std::to_string(port));
  }
  if (!ec) acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) throw BindError("cannot listen on " + interface + ":" + std::to_string(port) + ": " + ec.message());
  return acceptor;
}

}  // namespace

struct HttpServer::Impl {
  asio::io_context ioc;
  asio::executor_work_guard<asio::io_context::executor_type> work{ioc.get_executor()};
  std::vector<std::thread> threads;
  std::shared_ptr<Shared> shared;
  std::shared_ptr<Listener> listener;
  mutable std::mutex mutex;
  bool stopped = false;
};

HttpServer::HttpServer(Hub& hub, fs::path dir, std::function<std::string()> page, unsigned threads)
    : impl_(std::make_unique<Impl>()) {
  impl_->shared = std::make_shared<Shared>(Shared{hub, std::move(dir), std::move(page), std::make_shared<Registry>()});
  for (unsigned i = 0; i < std::max(1U, threads); ++i) {
    impl_->threads.emplace_back([this] { impl_->ioc.run(); });
  }
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::listen(const std::string& interface, std::uint16_t port) { rebind(interface, port); }

void HttpServer::rebind(const std::string& interface, std::uint16_t port) {
  std::lock_guard lock(impl_->mutex);
  auto listener = std::make_shared<Listener>(impl_->ioc, open_acceptor(impl_->ioc, interface, port), impl_->shared);
  if (impl_->listener) impl_->listener->stop();
  impl_->listener = listener;
  listener->start();
}

std::uint16_t HttpServer::port() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->listener ? impl_->listener->port() : 0;
}

void HttpServer::stop() {
  {
    std::lock_guard lock(impl_->mutex);
    if (impl_->stopped) return;
    impl_->stopped = true;
    if (impl_->listener) impl_->listener->stop();
  }
  impl_->work.reset();
  impl_->ioc.stop();
  for (auto& t : impl_->threads) t.join();
  // The hub must let go of connections before their sockets' context dies.
  std::map<sync::ClientId, std::weak_ptr<Connection>> live;
  {
    std::lock_guard lock(impl_->shared->registry->mutex);
    live.swap(impl_->shared->registry->live);
  }
  for (const auto& [id, conn] : live) impl_->shared->hub.disconnect(id);
}

}  // namespace cobra::server
