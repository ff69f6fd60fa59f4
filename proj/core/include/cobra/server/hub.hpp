#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cobra/assist/pipeline.hpp"
#include "cobra/config/settings.hpp"
#include "cobra/server/documents.hpp"
#include "cobra/server/wire.hpp"

namespace cobra::server {

/// One client connection as seen by the hub. send() is called with the hub
/// lock held: it must queue the frame, not block, and not call the hub.
class Connection {
 public:
  virtual ~Connection() = default;
  virtual void send(wire::Bytes frame) = 0;
  /// Asks the transport to close after the queued frames.
  virtual void close() = 0;
};

/// Routes protocol messages between sessions, the document store and the
/// assistants. Transport-agnostic and thread-safe: every message is handled
/// under one lock, which orders all edits of a document.
class Hub {
 public:
  struct Options {
    /// Run assistants; when false no annotations are produced.
    bool analyze = true;
    /// Environment seen by prerequisite probes (PATH, ...).
    std::map<std::string, std::string> env;
  };

  Hub(DocumentStore store, config::Settings settings, Options options,
      std::vector<std::string>* warnings = nullptr);
  ~Hub();

  Hub(const Hub&) = delete;
  Hub& operator=(const Hub&) = delete;

  /// Registers a connection; presenters may step fragments. Returns the
  /// client id, unique for the hub's lifetime.
  sync::ClientId connect(std::shared_ptr<Connection> connection, bool presenter);
  void disconnect(sync::ClientId client);

  /// Handles one binary frame. Undecodable frames get an Error reply.
  void receive(sync::ClientId client, std::span<const std::uint8_t> frame);
  void handle(sync::ClientId client, const wire::Message& msg);

  /// Switches to new settings and tells every session what changed.
  /// Returns the changes.
  std::vector<config::SettingChange> update_settings(const config::Settings& settings);
  [[nodiscard]] config::Settings settings() const;
  [[nodiscard]] std::string settings_digest() const;

  /// Blocks until no analysis is waiting or running.
  void wait_idle();

  /// Runs `f` with the store under the hub lock.
  template <typename F>
  auto with_store(F&& f) const {
    std::lock_guard lock(mutex_);
    return f(static_cast<const DocumentStore&>(store_));
  }

  [[nodiscard]] std::size_t session_count() const;

 private:
  struct Session {
    std::shared_ptr<Connection> connection;
    bool presenter = false;
    bool hello = false;
    std::set<std::string> open;
  };

  void send(Session& s, const wire::Message& msg);
  void send_error(Session& s, const std::string& code, const std::string& message);
  void send_state(Session& s, const std::string& view_id);
  void broadcast_view(const std::string& view_id, const wire::Message& msg, sync::ClientId except);
  void broadcast_annotations(const std::string& source_id);
  void request_analysis(const std::string& source_id);
  void deliver(assist::AnnotationBatch batch);

  void on_hello(sync::ClientId id, Session& s, const wire::ClientHello& m);
  void on_open(Session& s, const wire::OpenDoc& m);
  void on_edit(sync::ClientId id, Session& s, const wire::Edit& m);
  void on_step(Session& s, const wire::FragmentStep& m);

  mutable std::mutex mutex_;
  DocumentStore store_;
  config::Settings settings_;
  std::map<sync::ClientId, Session> sessions_;
  sync::ClientId next_client_ = 1;
  /// Language id -> pipeline. Declared last so it is destroyed first.
  std::map<std::string, std::unique_ptr<assist::AnalysisPipeline>> pipelines_;
};

/// Stable hexadecimal digest of the flattened settings.
std::string settings_digest(const config::Settings& settings);

}  // namespace cobra::server
