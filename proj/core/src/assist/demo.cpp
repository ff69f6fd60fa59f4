#include "cobra/assist/demo.hpp"

#include <algorithm>

#include "cobra/snippets/comments.hpp"

namespace cobra::assist {

using sync::Annotation;
using sync::AnnotationKind;

namespace {

bool ident_start(char32_t c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || c == U'_'; }
bool digit(char32_t c) { return c >= U'0' && c <= U'9'; }
bool ident_char(char32_t c) { return ident_start(c) || digit(c) || c == U'\''; }

bool is_keyword(TextView word) {
  const std::string w = to_utf8(word);
  return std::find(std::begin(kDemoKeywords), std::end(kDemoKeywords), w) != std::end(kDemoKeywords);
}

char32_t partner(char32_t close) {
  switch (close) {
    case U')': return U'(';
    case U']': return U'[';
    default: return U'{';
  }
}

void todos(TextView text, Range r, std::vector<Annotation>& out) {
  const TextView body = text.substr(r.begin, r.size());
  for (std::size_t p = body.find(U"TODO"); p != TextView::npos; p = body.find(U"TODO", p + 1)) {
    const bool left_ok = p == 0 || !ident_char(body[p - 1]);
    const bool right_ok = p + 4 >= body.size() || !ident_char(body[p + 4]);
    if (left_ok && right_ok) {
      out.push_back({{r.begin + p, r.begin + p + 4}, AnnotationKind::warning, "todo", "TODO"});
    }
  }
}

}  // namespace

std::vector<Annotation> demo_analyze(TextView text, const snippets::LanguageSyntax& syntax) {
  const snippets::LexResult lexed = snippets::lex(text, syntax);
  std::vector<Annotation> out;

  // Spans that are not code, in order.
  std::vector<Range> skip;
  for (const auto& c : lexed.comments) {
    out.push_back({c.range, AnnotationKind::token, "comment", ""});
    todos(text, c.range, out);
    skip.push_back(c.range);
  }
  for (const auto& s : lexed.strings) {
    out.push_back({s, AnnotationKind::token, "string", ""});
    skip.push_back(s);
  }
  std::sort(skip.begin(), skip.end(), [](Range a, Range b) { return a.begin < b.begin; });

  std::vector<std::pair<char32_t, std::size_t>> open;
  std::size_t k = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (k < skip.size() && i >= skip[k].begin) {
      i = std::max(i, skip[k].end);
      ++k;
      continue;
    }
    const std::size_t limit = k < skip.size() ? skip[k].begin : text.size();
    const char32_t c = text[i];
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < limit && ident_char(text[j])) ++j;
      const TextView word = text.substr(i, j - i);
      if (is_keyword(word)) {
        out.push_back({{i, j}, AnnotationKind::token, "keyword", ""});
      } else if (word == U"undefined") {
        out.push_back({{i, j}, AnnotationKind::info, "hole", "hole"});
      }
      i = j;
    } else if (digit(c)) {
      std::size_t j = i;
      while (j < limit && digit(text[j])) ++j;
      out.push_back({{i, j}, AnnotationKind::token, "number", ""});
      i = j;
    } else if (c == U'?') {
      std::size_t j = i;
      while (j < limit && text[j] == U'?') ++j;
      if (j - i == 3) out.push_back({{i, j}, AnnotationKind::info, "hole", "hole"});
      i = j;
    } else if (c == U'(' || c == U'[' || c == U'{') {
      open.emplace_back(c, i);
      ++i;
    } else if (c == U')' || c == U']' || c == U'}') {
      if (!open.empty() && open.back().first == partner(c)) {
        open.pop_back();
      } else {
        out.push_back({{i, i + 1}, AnnotationKind::error, "bracket", "unbalanced bracket"});
      }
      ++i;
    } else {
      ++i;
    }
  }
  for (const auto& [c, at] : open) {
    out.push_back({{at, at + 1}, AnnotationKind::error, "bracket", "unbalanced bracket"});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cobra::assist
