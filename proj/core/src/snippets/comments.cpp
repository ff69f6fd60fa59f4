#include "cobra/snippets/comments.hpp"

namespace cobra::snippets {

namespace {

bool starts_with_at(TextView text, std::size_t pos, TextView token) {
  return !token.empty() && text.substr(pos, token.size()) == token;
}

}  // namespace

LexResult lex(TextView text, const LanguageSyntax& syntax) {
  LexResult result;
  const TextView open = syntax.block_open;
  const TextView close = syntax.block_close;
  const Text opener = syntax.block_open + U"(" + syntax.block_close;
  const std::size_t n = text.size();

  std::size_t i = 0;
  while (i < n) {
    if (starts_with_at(text, i, opener)) {
      result.comments.push_back(
          Comment{Range{i, i + opener.size()}, Range{i + open.size(), i + open.size() + 1}, false});
      i += opener.size();
      continue;
    }
    if (starts_with_at(text, i, open)) {
      std::size_t depth = 1;
      std::size_t j = i + open.size();
      while (j < n && depth > 0) {
        if (syntax.nesting && starts_with_at(text, j, opener)) {
          j += opener.size();
        } else if (syntax.nesting && starts_with_at(text, j, open)) {
          ++depth;
          j += open.size();
        } else if (starts_with_at(text, j, close)) {
          --depth;
          j += close.size();
        } else {
          ++j;
        }
      }
      if (depth > 0) {
        result.comments.push_back(Comment{Range{i, n}, Range{i + open.size(), n}, false});
        result.diagnostics.push_back(UnterminatedComment{i});
        i = n;
      } else {
        result.comments.push_back(
            Comment{Range{i, j}, Range{i + open.size(), j - close.size()}, false});
        i = j;
      }
      continue;
    }
    if (syntax.line_comment && starts_with_at(text, i, *syntax.line_comment)) {
      std::size_t j = text.find(U'\n', i);
      if (j == TextView::npos) j = n;
      result.comments.push_back(
          Comment{Range{i, j}, Range{i + syntax.line_comment->size(), j}, true});
      i = j;
      continue;
    }
    if (text[i] == U'"') {
      std::size_t j = i + 1;
      while (j < n) {
        if (text[j] == U'\\' && j + 1 < n && text[j + 1] != U'\n') {
          j += 2;
        } else if (text[j] == U'"') {
          ++j;
          break;
        } else if (text[j] == U'\n') {
          break;
        } else {
          ++j;
        }
      }
      if (j > n) j = n;
      result.strings.push_back(Range{i, j});
      i = j;
      continue;
    }
    ++i;
  }
  return result;
}

std::vector<Range> comment_spans(TextView text, const LanguageSyntax& syntax,
                                 std::vector<UnterminatedComment>* diagnostics) {
  LexResult lexed = lex(text, syntax);
  std::vector<Range> spans;
  spans.reserve(lexed.comments.size());
  for (const auto& c : lexed.comments) spans.push_back(c.range);
  if (diagnostics) *diagnostics = std::move(lexed.diagnostics);
  return spans;
}

}  // namespace cobra::snippets
