#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cobra/config/settings.hpp"
#include "cobra/sync/annotation.hpp"
#include "cobra/sync/operation.hpp"

namespace cobra::server::wire {

inline constexpr std::uint64_t kProtocolVersion = 1;

struct ClientHello {
  std::uint64_t protocol_version = kProtocolVersion;
  friend bool operator==(const ClientHello&, const ClientHello&) = default;
};

struct ServerHello {
  std::string settings_digest;
  std::vector<std::string> docs;
  friend bool operator==(const ServerHello&, const ServerHello&) = default;
};

struct OpenDoc {
  std::string doc;
  friend bool operator==(const OpenDoc&, const OpenDoc&) = default;
};

struct DocState {
  std::string doc;
  std::uint64_t seq = 0;
  Text text;
  friend bool operator==(const DocState&, const DocState&) = default;
};

struct Edit {
  std::string doc;
  std::uint64_t parent_seq = 0;
  sync::Operation op;
  friend bool operator==(const Edit&, const Edit&) = default;
};

struct Ack {
  std::string doc;
  std::uint64_t seq = 0;
  friend bool operator==(const Ack&, const Ack&) = default;
};

struct RemoteEdit {
  std::string doc;
  std::uint64_t seq = 0;
  sync::Operation op;
  std::uint64_t author = 0;
  friend bool operator==(const RemoteEdit&, const RemoteEdit&) = default;
};

struct Annotations {
  std::string doc;
  std::uint64_t seq = 0;
  std::vector<sync::Annotation> batch;
  friend bool operator==(const Annotations&, const Annotations&) = default;
};

struct FragmentStep {
  std::string doc;
  std::uint64_t fragment = 0;
  std::uint64_t variant = 0;
  friend bool operator==(const FragmentStep&, const FragmentStep&) = default;
};

struct SettingsChanged {
  std::vector<config::SettingChange> changes;
  friend bool operator==(const SettingsChanged&, const SettingsChanged&) = default;
};

struct Error {
  std::string code;
  std::string message;
  friend bool operator==(const Error&, const Error&) = default;
};

/// Alternative index = tag byte.
using Message = std::variant<ClientHello, ServerHello, OpenDoc, DocState, Edit, Ack, RemoteEdit,
                             Annotations, FragmentStep, SettingsChanged, Error>;

namespace codes {
inline constexpr const char* kDocNotFound = "doc-not-found";
inline constexpr const char* kEditRejected = "edit-rejected";
inline constexpr const char* kForbidden = "forbidden";
inline constexpr const char* kProtocolVersion = "protocol-version";
inline constexpr const char* kBadMessage = "bad-message";
inline constexpr const char* kNotReady = "not-ready";
}  // namespace codes

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t offset, std::string reason);
  [[nodiscard]] std::size_t offset() const { return offset_; }
  [[nodiscard]] const std::string& reason() const { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

using Bytes = std::vector<std::uint8_t>;

/// One tag byte, then the fields in declaration order. Integers are
/// unsigned LEB128, strings a byte length and UTF-8, lists a count and the
/// elements. An operation is a list of components, each a kind byte
/// (0 retain, 1 insert, 2 delete) and a count or string. An annotation is
/// start, end, kind, class and message; a setting change is path, old
/// value, new value and a hot byte.
Bytes encode(const Message& msg);

/// Inverse of encode. Throws DecodeError on truncation, an unknown tag or
/// kind, invalid UTF-8, a varint over 64 bits, a zero-length component, an
/// inverted range or trailing bytes.
Message decode(std::span<const std::uint8_t> bytes);

const char* message_name(const Message& msg);

}  // namespace cobra::server::wire
