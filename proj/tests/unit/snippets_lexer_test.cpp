#include <gtest/gtest.h>

#include <random>

#include "cobra/snippets/comments.hpp"
#include "cobra/snippets/language.hpp"

namespace cobra::snippets {
namespace {

const LanguageSyntax& lang(std::string_view id) { return *find_language(id); }

// Reference lexer written as an explicit mode machine, independent of the
// library's implementation. Returns comment ranges.
std::vector<Range> reference_comments(TextView t, const LanguageSyntax& s) {
  const Text open = s.block_open;
  const Text close = s.block_close;
  const std::optional<Text> line = s.line_comment;
  const Text atomic = open + U"(" + close;
  auto at = [&](std::size_t i, const Text& tok) { return t.substr(i, tok.size()) == tok; };

  enum Mode { code, string, block, line_c } mode = code;
  std::vector<Range> out;
  std::size_t start = 0;
  int depth = 0;
  std::size_t i = 0;
  while (i < t.size()) {
    switch (mode) {
      case code:
        if (at(i, atomic)) {
          out.push_back({i, i + atomic.size()});
          i += atomic.size();
        } else if (at(i, open)) {
          mode = block;
          start = i;
          depth = 1;
          i += open.size();
        } else if (line && at(i, *line)) {
          mode = line_c;
          start = i;
          i += line->size();
        } else if (t[i] == U'"') {
          mode = string;
          ++i;
        } else {
          ++i;
        }
        break;
      case string:
        if (t[i] == U'\\' && i + 1 < t.size() && t[i + 1] != U'\n') {
          i += 2;
        } else {
          if (t[i] == U'"' || t[i] == U'\n') mode = code;
          ++i;
        }
        break;
      case block:
        if (at(i, close)) {
          i += close.size();
          if (--depth == 0) {
            out.push_back({start, i});
            mode = code;
          }
        } else if (s.nesting && at(i, open)) {
          ++depth;
          i += open.size();
        } else {
          ++i;
        }
        break;
      case line_c:
        if (t[i] == U'\n') {
          out.push_back({start, i});
          mode = code;
        }
        ++i;
        break;
    }
  }
  if (mode == block || mode == line_c) out.push_back({start, t.size()});
  return out;
}

std::vector<Range> ranges(const LexResult& r) {
  std::vector<Range> out;
  for (const auto& c : r.comments) out.push_back(c.range);
  return out;
}

TEST(Lexer, LanguagesAreRegistered) {
  EXPECT_EQ(lang("isabelle").block_open, U"(*");
  EXPECT_FALSE(lang("isabelle").line_comment);
  EXPECT_EQ(*lang("haskell").line_comment, U"--");
  EXPECT_TRUE(lang("haskell").nesting);
  EXPECT_FALSE(lang("scala").nesting);
  EXPECT_EQ(language_for_path("src/Seq.thy")->id, "isabelle");
  EXPECT_EQ(language_for_path("a/B.scala")->id, "scala");
  EXPECT_EQ(language_for_path("x.hs")->id, "haskell");
  EXPECT_EQ(language_for_path("x.txt"), nullptr);
}

TEST(Lexer, NestedHaskellComment) {
  const Text t = U"a {- x {- y -} z -} b";
  const auto r = lex(t, lang("haskell"));
  ASSERT_EQ(r.comments.size(), 1u);
  EXPECT_EQ(r.comments[0].range, (Range{2, 19}));
}

TEST(Lexer, ScalaDoesNotNest) {
  const Text t = U"/* a /* b */ c */";
  const auto r = lex(t, lang("scala"));
  ASSERT_EQ(r.comments.size(), 1u);
  EXPECT_EQ(r.comments[0].range, (Range{0, 12}));
}

TEST(Lexer, StringsHideCommentOpeners) {
  const Text t = U"val s = \"/* no */\" // yes";
  const auto r = lex(t, lang("scala"));
  ASSERT_EQ(r.comments.size(), 1u);
  EXPECT_TRUE(r.comments[0].line);
  EXPECT_EQ(r.strings.size(), 1u);
}

TEST(Lexer, UnterminatedBlockRunsToEnd) {
  const Text t = U"x (* open";
  const auto r = lex(t, lang("isabelle"));
  ASSERT_EQ(r.comments.size(), 1u);
  EXPECT_EQ(r.comments[0].range, (Range{2, t.size()}));
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].offset, 2u);
}

TEST(Lexer, IsabelleSelectionFragmentTokens) {
  const Text t = U"lemma x: \"A ==> (*(*)A(*)*)\"";
  // Inside a string nothing is a comment; outside it the atomic opener applies.
  EXPECT_TRUE(lex(t, lang("isabelle")).comments.empty());
  const Text u = U"A ==> (*(*)A(*)*)";
  const auto r = lex(u, lang("isabelle"));
  ASSERT_EQ(r.comments.size(), 2u);
  EXPECT_EQ(r.comments[0].range, (Range{6, 11}));
  EXPECT_EQ(r.comments[1].range, (Range{12, 17}));
}

TEST(Lexer, AgreesWithReferenceMachine) {
  std::mt19937_64 rng(31);
  const std::u32string_view alphabet = U"(*)/{-}|\"\\\nab ";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<std::size_t> len(0, 24);
  for (const char* id : {"isabelle", "scala", "haskell"}) {
    for (int i = 0; i < 20000; ++i) {
      Text t;
      for (std::size_t n = len(rng); n > 0; --n) t += alphabet[pick(rng)];
      ASSERT_EQ(ranges(lex(t, lang(id))), reference_comments(t, lang(id)))
          << id << ": " << to_utf8(t);
    }
  }
}

}  // namespace
}  // namespace cobra::snippets
