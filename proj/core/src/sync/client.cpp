#include "cobra/sync/client.hpp"

#include <stdexcept>

namespace cobra::sync {

std::optional<Outgoing> ClientDoc::local_edit(const Operation& op) {
  text_ = apply(text_, op);
  if (!outstanding_) {
    outstanding_ = op;
    return Outgoing{seq_, op};
  }
  buffer_ = buffer_ ? compose(*buffer_, op) : op;
  return std::nullopt;
}

void ClientDoc::remote_edit(std::uint64_t seq, const Operation& op) {
  Operation incoming = op;
  if (outstanding_) {
    auto [outstanding, transformed] = transform(*outstanding_, incoming);
    outstanding_ = std::move(outstanding);
    incoming = std::move(transformed);
    if (buffer_) {
      auto [buffered, again] = transform(*buffer_, incoming);
      buffer_ = std::move(buffered);
      incoming = std::move(again);
    }
  }
  text_ = apply(text_, incoming);
  seq_ = seq;
}

std::optional<Outgoing> ClientDoc::ack(std::uint64_t seq) {
  if (!outstanding_) throw std::logic_error("acknowledgment without an outstanding operation");
  seq_ = seq;
  outstanding_.reset();
  if (buffer_) {
    outstanding_ = std::move(buffer_);
    buffer_.reset();
    return Outgoing{seq_, *outstanding_};
  }
  return std::nullopt;
}

void ClientDoc::reset(Text text, std::uint64_t seq) {
  text_ = std::move(text);
  seq_ = seq;
  outstanding_.reset();
  buffer_.reset();
}

}  // namespace cobra::sync
