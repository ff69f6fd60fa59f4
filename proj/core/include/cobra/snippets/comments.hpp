#pragma once

#include <cstddef>
#include <vector>

#include "cobra/snippets/language.hpp"
#include "cobra/text.hpp"

namespace cobra::snippets {

struct Comment {
  Range range;  ///< Whole comment including delimiters.
  Range body;   ///< Text between the delimiters.
  bool line = false;
  friend bool operator==(const Comment&, const Comment&) = default;
};

struct UnterminatedComment {
  std::size_t offset = 0;
  friend bool operator==(const UnterminatedComment&, const UnterminatedComment&) = default;
};

struct LexResult {
  std::vector<Comment> comments;
  std::vector<Range> strings;
  std::vector<UnterminatedComment> diagnostics;
};

/// Finds comments and double-quoted string literals. Block comments nest
/// when the syntax says so. The sequence open + "(" + close (e.g. `(*(*)`)
/// is always a complete comment on its own, since it opens code fragments.
/// An unterminated block comment runs to the end of the text and is
/// reported in `diagnostics`; an unterminated string stops at the line end.
LexResult lex(TextView text, const LanguageSyntax& syntax);

/// Maximal comment spans in document order.
std::vector<Range> comment_spans(TextView text, const LanguageSyntax& syntax,
                                 std::vector<UnterminatedComment>* diagnostics = nullptr);

}  // namespace cobra::snippets
