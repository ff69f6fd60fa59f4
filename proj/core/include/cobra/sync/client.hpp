#pragma once

#include <cstdint>
#include <optional>

#include "cobra/sync/operation.hpp"
#include "cobra/text.hpp"

namespace cobra::sync {

/// An edit the client must send to the server.
struct Outgoing {
  std::uint64_t parent_seq = 0;
  Operation op;
};

/// Client half of the one-outstanding-operation protocol. Local edits are
/// sent one at a time; edits made while waiting for an acknowledgment are
/// composed into a buffer and sent when the ack arrives.
class ClientDoc {
 public:
  ClientDoc(Text text, std::uint64_t seq) : text_(std::move(text)), seq_(seq) {}

  [[nodiscard]] const Text& text() const { return text_; }
  [[nodiscard]] std::uint64_t seq() const { return seq_; }
  [[nodiscard]] bool synchronized() const { return !outstanding_; }
  [[nodiscard]] const std::optional<Operation>& outstanding() const { return outstanding_; }
  [[nodiscard]] const std::optional<Operation>& buffer() const { return buffer_; }

  /// Applies a local edit. Returns the message to send, if any.
  std::optional<Outgoing> local_edit(const Operation& op);

  /// Applies an operation committed by another author at `seq`.
  void remote_edit(std::uint64_t seq, const Operation& op);

  /// Handles the acknowledgment of the outstanding operation.
  std::optional<Outgoing> ack(std::uint64_t seq);

  /// Replaces the whole state, e.g. after the server rejected an edit.
  void reset(Text text, std::uint64_t seq);

 private:
  Text text_;
  std::uint64_t seq_;
  std::optional<Operation> outstanding_;
  std::optional<Operation> buffer_;
};

}  // namespace cobra::sync
