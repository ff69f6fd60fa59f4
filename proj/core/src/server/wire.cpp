#include "cobra/server/wire.hpp"

namespace cobra::server::wire {

namespace {

class Writer {
 public:
  void byte(std::uint8_t b) { out_.push_back(b); }

  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      out_.push_back(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    out_.push_back(static_cast<std::uint8_t>(v));
  }

  void string(const std::string& s) {
    varint(s.size());
    out_.insert(out_.end(), s.begin(), s.end());
  }

  void text(TextView t) { string(to_utf8(t)); }

  void op(const sync::Operation& o) {
    varint(o.components().size());
    for (const auto& c : o.components()) {
      if (const auto* r = std::get_if<sync::Retain>(&c)) {
        byte(0);
        varint(r->count);
      } else if (const auto* i = std::get_if<sync::Insert>(&c)) {
        byte(1);
        text(i->text);
      } else {
        byte(2);
        varint(std::get<sync::Delete>(c).count);
      }
    }
  }

  void annotation(const sync::Annotation& a) {
    varint(a.range.begin);
    varint(a.range.end);
    byte(static_cast<std::uint8_t>(a.kind));
    string(a.class_name);
    string(a.message);
  }

  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t byte() {
    need(1);
    return in_[pos_++];
  }

  std::uint64_t varint() {
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    for (int shift = 0;; shift += 7) {
      if (pos_ >= in_.size()) throw DecodeError(pos_, "truncated varint");
      const std::uint8_t b = in_[pos_++];
      if (shift == 63 && (b & 0x7E) != 0) throw DecodeError(start, "varint exceeds 64 bits");
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if ((b & 0x80) == 0) return v;
      if (shift == 63) throw DecodeError(start, "varint exceeds 64 bits");
    }
  }

  std::size_t count() {
    const std::size_t at = pos_;
    const std::uint64_t n = varint();
    // Every element takes at least one byte.
    if (n > in_.size() - pos_) throw DecodeError(at, "length exceeds message");
    return static_cast<std::size_t>(n);
  }

  std::string string() {
    const std::size_t n = count();
    const std::size_t at = pos_;
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    if (const auto bad = find_invalid_utf8(s); bad != std::string::npos) {
      throw DecodeError(at + bad, "invalid UTF-8");
    }
    return s;
  }

  Text text() { return from_utf8(string()); }

  sync::Operation op() {
    const std::size_t n = count();
    std::vector<sync::Component> comps;
    comps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t at = pos_;
      switch (byte()) {
        case 0: comps.emplace_back(sync::Retain{positive(at)}); break;
        case 1: {
          Text t = text();
          if (t.empty()) throw DecodeError(at, "empty insert");
          comps.emplace_back(sync::Insert{std::move(t)});
          break;
        }
        case 2: comps.emplace_back(sync::Delete{positive(at)}); break;
        default: throw DecodeError(at, "unknown component kind");
      }
    }
    return sync::Operation::from_components(comps);
  }

  sync::Annotation annotation() {
    const std::size_t at = pos_;
    sync::Annotation a;
    a.range.begin = varint();
    a.range.end = varint();
    if (a.range.end < a.range.begin) throw DecodeError(at, "inverted range");
    const std::size_t kind_at = pos_;
    const std::uint8_t k = byte();
    if (k > static_cast<std::uint8_t>(sync::AnnotationKind::token)) {
      throw DecodeError(kind_at, "unknown annotation kind");
    }
    a.kind = static_cast<sync::AnnotationKind>(k);
    a.class_name = string();
    a.message = string();
    return a;
  }

  bool flag() {
    const std::size_t at = pos_;
    const std::uint8_t b = byte();
    if (b > 1) throw DecodeError(at, "invalid boolean");
    return b == 1;
  }

  void finish() const {
    if (pos_ != in_.size()) throw DecodeError(pos_, "trailing bytes");
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;

  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw DecodeError(pos_, "truncated message");
  }

  std::size_t positive(std::size_t at) {
    const std::uint64_t n = varint();
    if (n == 0) throw DecodeError(at, "empty component");
    return static_cast<std::size_t>(n);
  }
};

struct Encoder {
  Writer& w;
  void operator()(const ClientHello& m) const { w.varint(m.protocol_version); }
  void operator()(const ServerHello& m) const {
    w.string(m.settings_digest);
    w.varint(m.docs.size());
    for (const auto& d : m.docs) w.string(d);
  }
  void operator()(const OpenDoc& m) const { w.string(m.doc); }
  void operator()(const DocState& m) const {
    w.string(m.doc);
    w.varint(m.seq);
    w.text(m.text);
  }
  void operator()(const Edit& m) const {
    w.string(m.doc);
    w.varint(m.parent_seq);
    w.op(m.op);
  }
  void operator()(const Ack& m) const {
    w.string(m.doc);
    w.varint(m.seq);
  }
  void operator()(const RemoteEdit& m) const {
    w.string(m.doc);
    w.varint(m.seq);
    w.op(m.op);
    w.varint(m.author);
  }
  void operator()(const Annotations& m) const {
    w.string(m.doc);
    w.varint(m.seq);
    w.varint(m.batch.size());
    for (const auto& a : m.batch) w.annotation(a);
  }
  void operator()(const FragmentStep& m) const {
    w.string(m.doc);
    w.varint(m.fragment);
    w.varint(m.variant);
  }
  void operator()(const SettingsChanged& m) const {
    w.varint(m.changes.size());
    for (const auto& c : m.changes) {
      w.string(c.path);
      w.string(c.old_value);
      w.string(c.new_value);
      w.byte(c.hot ? 1 : 0);
    }
  }
  void operator()(const Error& m) const {
    w.string(m.code);
    w.string(m.message);
  }
};

Message decode_body(std::uint8_t tag, Reader& r, std::size_t tag_at) {
  switch (tag) {
    case 0: return ClientHello{r.varint()};
    case 1: {
      ServerHello m;
      m.settings_digest = r.string();
      const std::size_t n = r.count();
      for (std::size_t i = 0; i < n; ++i) m.docs.push_back(r.string());
      return m;
    }
    case 2: return OpenDoc{r.string()};
    case 3: {
      DocState m;
      m.doc = r.string();
      m.seq = r.varint();
      m.text = r.text();
      return m;
    }
    case 4: {
      Edit m;
      m.doc = r.string();
      m.parent_seq = r.varint();
      m.op = r.op();
      return m;
    }
    case 5: {
      Ack m;
      m.doc = r.string();
      m.seq = r.varint();
      return m;
    }
    case 6: {
      RemoteEdit m;
      m.doc = r.string();
      m.seq = r.varint();
      m.op = r.op();
      m.author = r.varint();
      return m;
    }
    case 7: {
      Annotations m;
      m.doc = r.string();
      m.seq = r.varint();
      const std::size_t n = r.count();
      for (std::size_t i = 0; i < n; ++i) m.batch.push_back(r.annotation());
      return m;
    }
    case 8: {
      FragmentStep m;
      m.doc = r.string();
      m.fragment = r.varint();
      m.variant = r.varint();
      return m;
    }
    case 9: {
      SettingsChanged m;
      const std::size_t n = r.count();
      for (std::size_t i = 0; i < n; ++i) {
        config::SettingChange c;
        c.path = r.string();
        c.old_value = r.string();
        c.new_value = r.string();
        c.hot = r.flag();
        m.changes.push_back(std::move(c));
      }
      return m;
    }
    case 10: {
      Error m;
      m.code = r.string();
      m.message = r.string();
      return m;
    }
    default: throw DecodeError(tag_at, "unknown tag " + std::to_string(tag));
  }
}

}  // namespace

DecodeError::DecodeError(std::size_t offset, std::string reason)
    : std::runtime_error("decode error at byte " + std::to_string(offset) + ": " + reason),
      offset_(offset),
      reason_(std::move(reason)) {}

Bytes encode(const Message& msg) {
  Writer w;
  w.byte(static_cast<std::uint8_t>(msg.index()));
  std::visit(Encoder{w}, msg);
  return w.take();
}

Message decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::uint8_t tag = r.byte();
  Message m = decode_body(tag, r, 0);
  r.finish();
  return m;
}

const char* message_name(const Message& msg) {
  static constexpr const char* kNames[] = {"ClientHello", "ServerHello", "OpenDoc",
                                           "DocState",    "Edit",        "Ack",
                                           "RemoteEdit",  "Annotations", "FragmentStep",
                                           "SettingsChanged", "Error"};
  return kNames[msg.index()];
}

}  // namespace cobra::server::wire
