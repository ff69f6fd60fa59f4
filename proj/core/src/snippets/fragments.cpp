#include "cobra/snippets/fragments.hpp"

#include <optional>

namespace cobra::snippets {

namespace {

struct BodyScan {
  std::vector<Range> segments;    // completed segments
  std::size_t pending_begin = 0;  // start of the segment still open
  std::optional<std::size_t> close_at;
};

// Splits a comment body on depth-zero pipes, stopping at the depth-zero `)`.
BodyScan scan_body(TextView text, Range body, std::size_t from, std::size_t pending_begin) {
  BodyScan scan;
  scan.pending_begin = pending_begin;
  std::size_t depth = 0;
  for (std::size_t p = from; p < body.end; ++p) {
    const char32_t c = text[p];
    if (c == U'(') {
      ++depth;
    } else if (c == U')') {
      if (depth == 0) {
        scan.segments.push_back({scan.pending_begin, p});
        scan.close_at = p;
        return scan;
      }
      --depth;
    } else if (c == U'|' && depth == 0) {
      scan.segments.push_back({scan.pending_begin, p});
      scan.pending_begin = p + 1;
    }
  }
  return scan;
}

bool opens_fragment(TextView text, const Comment& c) {
  return !c.line && !c.body.empty() && text[c.body.begin] == U'(';
}

bool continues_fragment(TextView text, const Comment& c) {
  return !c.line && !c.body.empty() && (text[c.body.begin] == U'|' || text[c.body.begin] == U')');
}

FragmentVariant dead(TextView text, Range r) {
  return FragmentVariant{r, Text(text.substr(r.begin, r.size())), false};
}

}  // namespace

std::size_t Fragment::live_index() const {
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (variants[i].live) return i;
  }
  return 0;
}

MalformedFragment::MalformedFragment(std::size_t offset, std::string reason)
    : std::runtime_error("malformed code fragment at offset " + std::to_string(offset) + ": " +
                         reason),
      offset_(offset),
      reason_(std::move(reason)) {}

std::vector<Fragment> parse_fragments(TextView text, const LexResult& lexed) {
  std::vector<Fragment> fragments;
  const auto& comments = lexed.comments;
  std::size_t k = 0;
  while (k < comments.size()) {
    const Comment& opener = comments[k];
    if (!opens_fragment(text, opener)) {
      ++k;
      continue;
    }
    BodyScan head = scan_body(text, opener.body, opener.body.begin + 1, opener.body.begin + 1);
    // A comment that closes its own parenthesis, or leaves a variant
    // dangling at its end, is an ordinary comment.
    if (head.close_at || head.pending_begin != opener.body.end) {
      ++k;
      continue;
    }

    std::size_t m = k + 1;
    while (m < comments.size() && !continues_fragment(text, comments[m])) ++m;
    if (m == comments.size()) {
      throw MalformedFragment(opener.range.begin, "unclosed fragment");
    }
    const Comment& closer = comments[m];

    Fragment fragment;
    fragment.whole = {opener.range.begin, closer.range.end};
    for (const Range& r : head.segments) fragment.variants.push_back(dead(text, r));
    const Range live{opener.range.end, closer.range.begin};
    fragment.variants.push_back(
        FragmentVariant{live, Text(text.substr(live.begin, live.size())), true});

    if (text[closer.body.begin] == U'|') {
      BodyScan tail = scan_body(text, closer.body, closer.body.begin + 1, closer.body.begin + 1);
      if (!tail.close_at) {
        if (tail.pending_begin == closer.body.end) {
          throw MalformedFragment(closer.range.end, "two live segments");
        }
        throw MalformedFragment(tail.pending_begin, "variant spans a comment boundary");
      }
      if (*tail.close_at + 1 != closer.body.end) {
        throw MalformedFragment(*tail.close_at, "text after the closing parenthesis");
      }
      for (const Range& r : tail.segments) fragment.variants.push_back(dead(text, r));
    } else if (closer.body.begin + 1 != closer.body.end) {
      throw MalformedFragment(closer.body.begin, "text after the closing parenthesis");
    }

    fragments.push_back(std::move(fragment));
    k = m + 1;
  }
  return fragments;
}

std::vector<Fragment> parse_fragments(TextView text, const LanguageSyntax& syntax) {
  return parse_fragments(text, lex(text, syntax));
}

}  // namespace cobra::snippets
