#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobra/sync/operation.hpp"
#include "cobra/text.hpp"

namespace cobra::sync {

using ClientId = std::uint64_t;

/// Author id used for revisions the server makes itself (fragment steps).
inline constexpr ClientId kServerAuthor = 0;

struct Revision {
  Operation op;
  ClientId author = kServerAuthor;
  std::uint64_t seq = 0;
};

/// Thrown when a client names a parent revision the log does not have.
class InvalidParent : public std::out_of_range {
 public:
  InvalidParent(std::uint64_t parent, std::uint64_t latest)
      : std::out_of_range("parent revision " + std::to_string(parent) +
                          " is ahead of latest revision " + std::to_string(latest)),
        parent_(parent),
        latest_(latest) {}

  [[nodiscard]] std::uint64_t parent() const { return parent_; }
  [[nodiscard]] std::uint64_t latest() const { return latest_; }

 private:
  std::uint64_t parent_;
  std::uint64_t latest_;
};

/// Append-only history of one document. Sequence numbers are 1-based;
/// seq 0 names the initial text. Not thread-safe: callers serialize access.
class RevisionLog {
 public:
  RevisionLog(std::string doc_id, Text initial_text);

  [[nodiscard]] const std::string& doc_id() const { return doc_id_; }
  [[nodiscard]] const Text& initial_text() const { return initial_; }
  [[nodiscard]] const Text& text() const { return head_; }
  [[nodiscard]] std::uint64_t head_seq() const { return revisions_.size(); }
  [[nodiscard]] const std::vector<Revision>& revisions() const { return revisions_; }

  /// Transforms `op`, written against revision `parent_seq`, so that it
  /// applies to the head text.
  [[nodiscard]] Operation rebase(std::uint64_t parent_seq, Operation op) const;

  /// Appends an operation based on the head text; returns its seq.
  std::uint64_t commit(ClientId author, Operation op);

  /// Replays the log up to and including `seq`.
  [[nodiscard]] Text text_at(std::uint64_t seq) const;

 private:
  std::string doc_id_;
  Text initial_;
  Text head_;
  std::vector<Revision> revisions_;
};

struct Received {
  std::uint64_t committed_seq = 0;
  Operation transformed_op;
};

/// Server-side handling of a client edit: rebase onto head, then commit.
Received receive(RevisionLog& log, ClientId author, std::uint64_t parent_seq, Operation op);

}  // namespace cobra::sync
