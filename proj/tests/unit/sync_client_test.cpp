#include <gtest/gtest.h>

#include <deque>
#include <random>

#include "cobra/sync/annotation.hpp"
#include "cobra/sync/client.hpp"
#include "cobra/sync/revision_log.hpp"
#include "random_ops.hpp"

namespace cobra::sync {
namespace {

struct Sent {
  ClientId from;
  Outgoing edit;
};

struct Delivered {
  enum Kind { ack, remote } kind;
  std::uint64_t seq;
  Operation op;
};

TEST(RevisionLog, RejectsFutureParent) {
  RevisionLog log("d", U"abc");
  Operation op;
  op.retain(3);
  EXPECT_THROW((void)log.rebase(1, op), InvalidParent);
}

TEST(RevisionLog, RebasesOverConcurrentCommits) {
  RevisionLog log("d", U"abc");
  Operation first;
  first.insert(Text(U"X")).retain(3);
  EXPECT_EQ(log.commit(1, first), 1u);
  Operation late;
  late.retain(3).insert(Text(U"Y"));
  const auto r = receive(log, 2, 0, late);
  EXPECT_EQ(r.committed_seq, 2u);
  EXPECT_EQ(log.text(), U"XabcY");
  EXPECT_EQ(log.text_at(0), U"abc");
  EXPECT_EQ(log.text_at(1), U"Xabc");
}

TEST(ClientDoc, BuffersWhileAwaitingAck) {
  ClientDoc c(U"ab", 0);
  Operation e1;
  e1.retain(2).insert(Text(U"c"));
  auto out = c.local_edit(e1);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->parent_seq, 0u);
  Operation e2;
  e2.retain(3).insert(Text(U"d"));
  EXPECT_FALSE(c.local_edit(e2));
  auto next = c.ack(1);
  ASSERT_TRUE(next);
  EXPECT_EQ(next->parent_seq, 1u);
  EXPECT_EQ(sync::apply(U"abc", next->op), U"abcd");
  EXPECT_FALSE(c.ack(2));
  EXPECT_TRUE(c.synchronized());
}

// Randomized schedule: clients edit, the server processes edits in arrival
// order, and deliveries to each client stay in FIFO order.
TEST(ClientDoc, RandomSchedulesConverge) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    const Text initial = testing::random_text(rng, 8);
    RevisionLog log("d", initial);
    const int n = 3;
    std::vector<ClientDoc> clients(n, ClientDoc(initial, 0));
    std::deque<Sent> to_server;
    std::vector<std::deque<Delivered>> to_client(n);
    std::uniform_int_distribution<int> action(0, 2);
    std::uniform_int_distribution<int> who(0, n - 1);
    for (int step = 0; step < 60; ++step) {
      const int c = who(rng);
      switch (action(rng)) {
        case 0: {
          const Operation op = testing::random_operation(rng, clients[c].text().size());
          if (auto out = clients[c].local_edit(op)) to_server.push_back({ClientId(c + 1), *out});
          break;
        }
        case 1:
          if (!to_server.empty()) {
            Sent s = to_server.front();
            to_server.pop_front();
            const auto r = receive(log, s.from, s.edit.parent_seq, s.edit.op);
            for (int k = 0; k < n; ++k) {
              if (ClientId(k + 1) == s.from) {
                to_client[k].push_back({Delivered::ack, r.committed_seq, {}});
              } else {
                to_client[k].push_back({Delivered::remote, r.committed_seq, r.transformed_op});
              }
            }
          }
          break;
        default:
          if (!to_client[c].empty()) {
            Delivered d = to_client[c].front();
            to_client[c].pop_front();
            if (d.kind == Delivered::ack) {
              if (auto out = clients[c].ack(d.seq)) to_server.push_back({ClientId(c + 1), *out});
            } else {
              clients[c].remote_edit(d.seq, d.op);
            }
          }
      }
    }
    // Quiesce.
    bool busy = true;
    while (busy) {
      busy = false;
      while (!to_server.empty()) {
        busy = true;
        Sent s = to_server.front();
        to_server.pop_front();
        const auto r = receive(log, s.from, s.edit.parent_seq, s.edit.op);
        for (int k = 0; k < n; ++k) {
          to_client[k].push_back(ClientId(k + 1) == s.from
                                     ? Delivered{Delivered::ack, r.committed_seq, {}}
                                     : Delivered{Delivered::remote, r.committed_seq, r.transformed_op});
        }
      }
      for (int k = 0; k < n; ++k) {
        while (!to_client[k].empty()) {
          busy = true;
          Delivered d = to_client[k].front();
          to_client[k].pop_front();
          if (d.kind == Delivered::ack) {
            if (auto out = clients[k].ack(d.seq)) to_server.push_back({ClientId(k + 1), *out});
          } else {
            clients[k].remote_edit(d.seq, d.op);
          }
        }
      }
    }
    for (const auto& c : clients) {
      ASSERT_EQ(c.text(), log.text());
      ASSERT_EQ(c.seq(), log.head_seq());
      ASSERT_TRUE(c.synchronized());
    }
  }
}

TEST(Annotations, MoveWithEdits) {
  std::vector<Annotation> anns{{{1, 3}, AnnotationKind::error, "e", "m"},
                               {{4, 5}, AnnotationKind::token, "keyword", ""}};
  Operation op;
  op.insert(Text(U"xx")).retain(3).erase(2);
  const auto moved = transform_annotations(anns, op);
  ASSERT_EQ(moved.size(), 1u);
  EXPECT_EQ(moved[0].range, (Range{3, 5}));
}

TEST(Annotations, InsertAtEdgesStaysOutside) {
  std::vector<Annotation> anns{{{1, 2}, AnnotationKind::info, "hole", ""}};
  Operation op;
  op.retain(1).insert(Text(U"a")).retain(1).insert(Text(U"b")).retain(1);
  const auto moved = transform_annotations(anns, op);
  ASSERT_EQ(moved.size(), 1u);
  EXPECT_EQ(moved[0].range, (Range{2, 3}));
}

}  // namespace
}  // namespace cobra::sync
