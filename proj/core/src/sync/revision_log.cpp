#include "cobra/sync/revision_log.hpp"

#include <utility>

namespace cobra::sync {

RevisionLog::RevisionLog(std::string doc_id, Text initial_text)
    : doc_id_(std::move(doc_id)), initial_(std::move(initial_text)), head_(initial_) {}

Operation RevisionLog::rebase(std::uint64_t parent_seq, Operation op) const {
  if (parent_seq > head_seq()) throw InvalidParent(parent_seq, head_seq());
  for (std::uint64_t i = parent_seq; i < revisions_.size(); ++i) {
    op = transform(op, revisions_[i].op).first;
  }
  return op;
}

std::uint64_t RevisionLog::commit(ClientId author, Operation op) {
  head_ = apply(head_, op);
  const std::uint64_t seq = revisions_.size() + 1;
  revisions_.push_back(Revision{std::move(op), author, seq});
  return seq;
}

Text RevisionLog::text_at(std::uint64_t seq) const {
  if (seq > head_seq()) throw InvalidParent(seq, head_seq());
  Text text = initial_;
  for (std::uint64_t i = 0; i < seq; ++i) text = apply(text, revisions_[i].op);
  return text;
}

Received receive(RevisionLog& log, ClientId author, std::uint64_t parent_seq, Operation op) {
  Operation rebased = log.rebase(parent_seq, std::move(op));
  const std::uint64_t seq = log.commit(author, rebased);
  return Received{seq, std::move(rebased)};
}

}  // namespace cobra::sync
