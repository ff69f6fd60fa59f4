#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <httplib.h>

#include "cobra/assets.hpp"
#include "cobra/server/http.hpp"
#include "cobra/server/hub.hpp"

namespace cobra::server {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("cobra-http-" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_ / "site" / "img");
    std::ofstream(path_ / "site" / "img" / "x.png") << "PNG";
    std::ofstream(path_ / "secret.txt") << "secret";
    fs::create_symlink(path_ / "secret.txt", path_ / "site" / "link.txt");
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] fs::path site() const { return path_ / "site"; }

 private:
  fs::path path_;
};

std::string page() { return "<title>T</title>"; }

TEST(ServeStatic, Routes) {
  TempDir dir;
  auto r = serve_static("/", dir.site(), page);
  EXPECT_EQ(r.status, 200U);
  EXPECT_EQ(r.body, page());
  r = serve_static("/client/cobra.js?v=1", dir.site(), page);
  EXPECT_EQ(r.status, 200U);
  EXPECT_EQ(r.body, *embedded_asset("client/cobra.js"));
  EXPECT_EQ(r.content_type, "text/javascript; charset=utf-8");
  r = serve_static("/img/x.png", dir.site(), page);
  EXPECT_EQ(r.status, 200U);
  EXPECT_EQ(r.content_type, "image/png");
  EXPECT_EQ(r.body, "PNG");
  EXPECT_EQ(serve_static("/img/%78.png", dir.site(), page).status, 200U);
}

TEST(ServeStatic, NotFound) {
  TempDir dir;
  for (const char* t : {"/../secret.txt", "/%2e%2e/secret.txt", "/img/../../secret.txt", "/link.txt",
                        "/client/../reference.conf", "/client/none.js", "/nope", "/img", "/%zz",
                        "/../etc/passwd", "relative"}) {
    EXPECT_EQ(serve_static(t, dir.site(), page).status, 404U) << t;
  }
}

TEST(HttpServer, ServesPagesAndRebinds) {
  TempDir dir;
  Hub hub(DocumentStore{}, config::resolve({}, config::reference_config()), {false, {}});
  HttpServer server(hub, dir.site(), page);
  server.listen("127.0.0.1", 0);
  const auto port = server.port();
  ASSERT_NE(port, 0);
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, page());
  res = client.Get("/img/x.png");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Content-Type"), "image/png");
  res = client.Get("/../secret.txt");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);

  HttpServer other(hub, dir.site(), page);
  try {
    other.listen("127.0.0.1", port);
    FAIL() << "expected BindError";
  } catch (const BindError& e) {
    EXPECT_NE(std::string(e.what()).find("address in use"), std::string::npos);
  }

  server.rebind("127.0.0.1", 0);
  const auto moved = server.port();
  EXPECT_NE(moved, port);
  httplib::Client moved_client("127.0.0.1", moved);
  res = moved_client.Get("/");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST(HttpServer, WebSocketSession) {
  TempDir dir;
  DocumentStore store;
  store.add_source("s", U"val x = /*(*/???/*|3)*/", "demo");
  store.add_view({"v", "s", std::nullopt, true});
  auto settings = config::resolve({}, config::reference_config());
  Hub hub(std::move(store), settings, {false, {}});
  HttpServer server(hub, dir.site(), page);
  server.listen("127.0.0.1", 0);

  namespace beast = boost::beast;
  boost::asio::io_context ioc;
  boost::asio::ip::tcp::socket socket(ioc);
  socket.connect({boost::asio::ip::make_address("127.0.0.1"), server.port()});
  beast::websocket::stream<boost::asio::ip::tcp::socket> ws(std::move(socket));
  ws.handshake("127.0.0.1", "/ws");
  ws.binary(true);
  auto send = [&](const wire::Message& m) {
    const auto b = wire::encode(m);
    ws.write(boost::asio::buffer(b));
  };
  auto recv = [&] {
    beast::flat_buffer buf;
    ws.read(buf);
    const auto d = buf.cdata();
    auto m = wire::decode(std::span(static_cast<const std::uint8_t*>(d.data()), d.size()));
    if (auto* e = std::get_if<wire::Error>(&m)) ADD_FAILURE() << e->code << ": " << e->message;
    return m;
  };
  send(wire::ClientHello{1});
  auto hello = std::get<wire::ServerHello>(recv());
  EXPECT_EQ(hello.docs, std::vector<std::string>{"v"});
  send(wire::OpenDoc{"v"});
  auto state = std::get<wire::DocState>(recv());
  EXPECT_EQ(state.text, U"val x = ???");
  // Loopback clients are presenters.
  send(wire::FragmentStep{"v", 0, 1});
  auto edit = std::get<wire::RemoteEdit>(recv());
  EXPECT_EQ(sync::apply(state.text, edit.op), U"val x = 3");
  EXPECT_EQ(std::get<wire::FragmentStep>(recv()), (wire::FragmentStep{"v", 0, 1}));
  // Annotations re-projected for the stepped view.
  EXPECT_TRUE(std::holds_alternative<wire::Annotations>(recv()));
  send(wire::Edit{"v", 1, sync::Operation().retain(9).insert(Text(U"4"))});
  EXPECT_EQ(std::get<wire::Ack>(recv()), (wire::Ack{"v", 2}));
  EXPECT_EQ(hub.with_store([](const DocumentStore& s) { return s.source("s").log.text(); }),
            U"val x = /*(*/???/*|34)*/");
  ws.close(beast::websocket::close_code::normal);
}

}  // namespace
}  // namespace cobra::server
