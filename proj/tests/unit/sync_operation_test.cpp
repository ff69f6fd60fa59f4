#include <gtest/gtest.h>

#include <random>

#include "cobra/sync/operation.hpp"
#include "random_ops.hpp"

namespace cobra::sync {
namespace {

using testing::random_operation;
using testing::random_splices;
using testing::random_text;
using testing::splice_oracle;
using testing::to_operation;

bool normal_form(const Operation& op) {
  const auto& cs = op.components();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (const auto* r = std::get_if<Retain>(&cs[i]); r && r->count == 0) return false;
    if (const auto* d = std::get_if<Delete>(&cs[i]); d && d->count == 0) return false;
    if (const auto* n = std::get_if<Insert>(&cs[i]); n && n->text.empty()) return false;
    if (i > 0) {
      if (cs[i].index() == cs[i - 1].index()) return false;
      if (std::holds_alternative<Insert>(cs[i]) && std::holds_alternative<Delete>(cs[i - 1])) {
        return false;
      }
    }
  }
  return true;
}

TEST(Operation, BuilderMergesAndReorders) {
  Operation op;
  op.retain(2).retain(1).erase(1).insert(Text(U"ab")).insert(Text(U"c")).erase(2);
  ASSERT_EQ(op.components().size(), 3u);
  EXPECT_EQ(std::get<Retain>(op.components()[0]).count, 3u);
  EXPECT_EQ(std::get<Insert>(op.components()[1]).text, U"abc");
  EXPECT_EQ(std::get<Delete>(op.components()[2]).count, 3u);
  EXPECT_EQ(op.base_length(), 6u);
  EXPECT_EQ(op.target_length(), 6u);
}

TEST(Operation, ApplyRejectsWrongLength) {
  Operation op;
  op.retain(3);
  EXPECT_THROW(sync::apply(U"ab", op), LengthMismatch);
}

TEST(Operation, FromComponentsRejectsEmptyParts) {
  EXPECT_THROW(Operation::from_components({Retain{0}}), std::invalid_argument);
  EXPECT_THROW(Operation::from_components({Insert{}}), std::invalid_argument);
  const auto op = Operation::from_components({Delete{1}, Insert{U"x"}, Retain{2}});
  EXPECT_TRUE(normal_form(op));
  EXPECT_EQ(sync::apply(U"abc", op), U"xbc");
}

TEST(Operation, IdentityIsNoop) {
  EXPECT_TRUE(Operation::identity(5).is_noop());
  EXPECT_TRUE(Operation().is_noop());
  Operation op;
  op.retain(1).insert(Text(U"x"));
  EXPECT_FALSE(op.is_noop());
}

TEST(Operation, ApplyAgreesWithSpliceOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const Text base = random_text(rng, 12);
    const auto splices = random_splices(rng, base.size());
    const Operation op = to_operation(splices, base.size());
    ASSERT_TRUE(normal_form(op));
    ASSERT_EQ(sync::apply(base, op), splice_oracle(base, splices));
  }
}

TEST(Operation, ComposeMatchesSequentialApplication) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20000; ++i) {
    const Text base = random_text(rng, 12);
    const auto s1 = random_splices(rng, base.size());
    const Text mid = splice_oracle(base, s1);
    const auto s2 = random_splices(rng, mid.size());
    const Operation ab = compose(to_operation(s1, base.size()), to_operation(s2, mid.size()));
    ASSERT_TRUE(normal_form(ab));
    ASSERT_EQ(sync::apply(base, ab), splice_oracle(mid, s2));
  }
}

TEST(Operation, ComposeIsAssociative) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 5000; ++i) {
    const Text t0 = random_text(rng, 10);
    const Operation a = random_operation(rng, t0.size());
    const Operation b = random_operation(rng, a.target_length());
    const Operation c = random_operation(rng, b.target_length());
    ASSERT_EQ(sync::apply(t0, compose(compose(a, b), c)), sync::apply(t0, compose(a, compose(b, c))));
  }
}

TEST(Operation, ComposeRejectsMismatchedLengths) {
  Operation a;
  a.retain(2);
  Operation b;
  b.retain(3);
  EXPECT_THROW(compose(a, b), LengthMismatch);
}

TEST(Operation, TransformSatisfiesTp1) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20000; ++i) {
    const Text base = random_text(rng, 10);
    const Operation a = random_operation(rng, base.size(), U"xy");
    const Operation b = random_operation(rng, base.size(), U"yz");
    const auto [a2, b2] = transform(a, b);
    ASSERT_TRUE(normal_form(a2));
    ASSERT_TRUE(normal_form(b2));
    ASSERT_EQ(sync::apply(sync::apply(base, a), b2), sync::apply(sync::apply(base, b), a2));
  }
}

TEST(Operation, TransformTieFavorsLeftInsert) {
  Operation a;
  a.retain(1).insert(Text(U"A")).retain(1);
  Operation b;
  b.retain(1).insert(Text(U"B")).retain(1);
  const auto [a2, b2] = transform(a, b);
  EXPECT_EQ(sync::apply(sync::apply(U"xy", a), b2), U"xABy");
}

TEST(Operation, TransformPosition) {
  Operation op;
  op.retain(2).insert(Text(U"abc")).erase(1).retain(2);
  EXPECT_EQ(transform_position(0, op, true), 0u);
  EXPECT_EQ(transform_position(2, op, true), 5u);
  EXPECT_EQ(transform_position(2, op, false), 2u);
  EXPECT_EQ(transform_position(3, op, false), 5u);
  EXPECT_EQ(transform_position(5, op, false), 7u);
}

}  // namespace
}  // namespace cobra::sync
