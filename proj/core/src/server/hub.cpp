#include "cobra/server/hub.hpp"

#include <cstdio>

#include "cobra/snippets/projection.hpp"

namespace cobra::server {

namespace codes = wire::codes;

std::string settings_digest(const config::Settings& settings) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& [k, v] : config::flatten(settings)) {
    for (char c : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Hub::Hub(DocumentStore store, config::Settings settings, Options options,
         std::vector<std::string>* warnings)
    : store_(std::move(store)), settings_(std::move(settings)) {
  if (!options.analyze) return;
  for (const auto& id : store_.source_ids()) {
    const std::string& language = store_.source(id).language;
    if (language.empty() || pipelines_.contains(language)) continue;
    const auto spec = assist::assistant_spec(language, settings_);
    pipelines_[language] = std::make_unique<assist::AnalysisPipeline>(
        assist::make_assistant(spec, options.env, warnings),
        std::chrono::milliseconds(spec.debounce_ms),
        [this](assist::AnnotationBatch b) { deliver(std::move(b)); });
  }
  std::lock_guard lock(mutex_);
  for (const auto& id : store_.source_ids()) request_analysis(id);
}

Hub::~Hub() {
  // Workers call deliver(), so they must stop before anything else goes.
  pipelines_.clear();
}

sync::ClientId Hub::connect(std::shared_ptr<Connection> connection, bool presenter) {
  std::lock_guard lock(mutex_);
  const sync::ClientId id = next_client_++;
  sessions_[id] = Session{std::move(connection), presenter, false, {}};
  return id;
}

void Hub::disconnect(sync::ClientId client) {
  std::lock_guard lock(mutex_);
  sessions_.erase(client);
}

std::size_t Hub::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

config::Settings Hub::settings() const {
  std::lock_guard lock(mutex_);
  return settings_;
}

std::string Hub::settings_digest() const {
  std::lock_guard lock(mutex_);
  return server::settings_digest(settings_);
}

void Hub::send(Session& s, const wire::Message& msg) { s.connection->send(wire::encode(msg)); }

void Hub::send_error(Session& s, const std::string& code, const std::string& message) {
  send(s, wire::Error{code, message});
}

void Hub::send_state(Session& s, const std::string& view_id) {
  const View& v = store_.view(view_id);
  send(s, wire::DocState{view_id, v.log.head_seq(), v.log.text()});
  auto anns = store_.view_annotations(view_id);
  if (!anns.empty()) send(s, wire::Annotations{view_id, v.log.head_seq(), std::move(anns)});
}

void Hub::broadcast_view(const std::string& view_id, const wire::Message& msg, sync::ClientId except) {
  const wire::Bytes frame = wire::encode(msg);
  for (auto& [id, s] : sessions_) {
    if (id != except && s.open.contains(view_id)) s.connection->send(frame);
  }
}

void Hub::broadcast_annotations(const std::string& source_id) {
  for (const auto& view_id : store_.views_of(source_id)) {
    const View& v = store_.view(view_id);
    broadcast_view(view_id, wire::Annotations{view_id, v.log.head_seq(), store_.view_annotations(view_id)},
                   0);
  }
}

void Hub::request_analysis(const std::string& source_id) {
  const Source& src = store_.source(source_id);
  const auto it = pipelines_.find(src.language);
  if (it == pipelines_.end()) return;
  it->second->request(source_id, src.log.head_seq(), src.log.text());
}

void Hub::deliver(assist::AnnotationBatch batch) {
  std::lock_guard lock(mutex_);
  if (!store_.has_source(batch.doc_id)) return;
  store_.set_annotations(batch.doc_id, batch.for_seq, std::move(batch.annotations));
  broadcast_annotations(batch.doc_id);
}

void Hub::wait_idle() {
  for (auto& [lang, p] : pipelines_) p->wait_idle();
}

void Hub::receive(sync::ClientId client, std::span<const std::uint8_t> frame) {
  wire::Message msg;
  try {
    msg = wire::decode(frame);
  } catch (const wire::DecodeError& e) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(client);
    if (it != sessions_.end()) send_error(it->second, codes::kBadMessage, e.what());
    return;
  }
  handle(client, msg);
}

void Hub::handle(sync::ClientId client, const wire::Message& msg) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(client);
  if (it == sessions_.end()) return;
  Session& s = it->second;
  if (const auto* hello = std::get_if<wire::ClientHello>(&msg)) {
    on_hello(client, s, *hello);
    return;
  }
  if (!s.hello) {
    send_error(s, codes::kNotReady, "expected ClientHello first");
    return;
  }
  if (const auto* m = std::get_if<wire::OpenDoc>(&msg)) {
    on_open(s, *m);
  } else if (const auto* m = std::get_if<wire::Edit>(&msg)) {
    on_edit(client, s, *m);
  } else if (const auto* m = std::get_if<wire::FragmentStep>(&msg)) {
    on_step(s, *m);
  } else {
    send_error(s, codes::kBadMessage, std::string(wire::message_name(msg)) + " is sent by the server");
  }
}

void Hub::on_hello(sync::ClientId id, Session& s, const wire::ClientHello& m) {
  if (m.protocol_version != wire::kProtocolVersion) {
    send_error(s, codes::kProtocolVersion,
               "server speaks protocol " + std::to_string(wire::kProtocolVersion) + ", client " +
                   std::to_string(m.protocol_version));
    s.connection->close();
    sessions_.erase(id);
    return;
  }
  s.hello = true;
  send(s, wire::ServerHello{server::settings_digest(settings_), store_.view_ids()});
}

void Hub::on_open(Session& s, const wire::OpenDoc& m) {
  if (!store_.has_view(m.doc)) {
    send_error(s, codes::kDocNotFound, "no document '" + m.doc + "'");
    return;
  }
  s.open.insert(m.doc);
  send_state(s, m.doc);
}

void Hub::on_edit(sync::ClientId id, Session& s, const wire::Edit& m) {
  if (!store_.has_view(m.doc)) {
    send_error(s, codes::kDocNotFound, "no document '" + m.doc + "'");
    return;
  }
  if (!s.open.contains(m.doc)) {
    send_error(s, codes::kNotReady, "document '" + m.doc + "' is not open");
    return;
  }
  EditOutcome out;
  try {
    out = store_.edit(m.doc, id, m.parent_seq, m.op);
  } catch (const snippets::EditRejected& e) {
    send_error(s, codes::kEditRejected, e.what());
    send_state(s, m.doc);
    return;
  } catch (const std::exception& e) {
    // Unknown parent or an operation that does not fit the text.
    send_error(s, codes::kBadMessage, e.what());
    send_state(s, m.doc);
    return;
  }
  send(s, wire::Ack{m.doc, out.seq});
  broadcast_view(m.doc, wire::RemoteEdit{m.doc, out.seq, out.view_op, id}, id);
  for (const auto& u : out.others) {
    broadcast_view(u.view_id, wire::RemoteEdit{u.view_id, u.seq, u.op, id}, 0);
  }
  request_analysis(store_.view(m.doc).spec.source_id);
}

void Hub::on_step(Session& s, const wire::FragmentStep& m) {
  if (!s.presenter) {
    send_error(s, codes::kForbidden, "only the presenter steps fragments");
    return;
  }
  if (!store_.has_view(m.doc)) {
    send_error(s, codes::kDocNotFound, "no document '" + m.doc + "'");
    return;
  }
  const std::string source_id = store_.view(m.doc).spec.source_id;
  const auto& fragments = store_.source(source_id).structure.fragments;
  if (m.fragment >= fragments.size() || m.variant >= fragments[m.fragment].variants.size()) {
    send_error(s, codes::kBadMessage, "no such fragment variant");
    return;
  }
  std::vector<ViewUpdate> updates;
  try {
    updates = store_.step_fragment(source_id, m.fragment, m.variant);
  } catch (const std::exception& e) {
    send_error(s, codes::kEditRejected, e.what());
    return;
  }
  for (const auto& u : updates) {
    broadcast_view(u.view_id, wire::RemoteEdit{u.view_id, u.seq, u.op, sync::kServerAuthor}, 0);
  }
  const wire::Bytes frame = wire::encode(m);
  for (auto& [cid, other] : sessions_) {
    if (other.hello) other.connection->send(frame);
  }
  broadcast_annotations(source_id);
}

std::vector<config::SettingChange> Hub::update_settings(const config::Settings& settings) {
  std::lock_guard lock(mutex_);
  auto changes = config::diff_settings(settings_, settings);
  settings_ = settings;
  if (changes.empty()) return changes;
  const wire::Bytes frame = wire::encode(wire::SettingsChanged{changes});
  for (auto& [id, s] : sessions_) {
    if (s.hello) s.connection->send(frame);
  }
  return changes;
}

}  // namespace cobra::server
