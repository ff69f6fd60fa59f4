#include "cobra/snippets/markers.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace cobra::snippets {

namespace {

std::string kind_text(SnippetError::Kind kind) {
  switch (kind) {
    case SnippetError::Kind::unmatched_begin:
      return "unmatched begin marker";
    case SnippetError::Kind::unmatched_end:
      return "unmatched end marker";
    case SnippetError::Kind::duplicate_name:
      return "duplicate snippet name";
  }
  return "snippet error";
}

TextView trim(TextView s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_id_char(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9') ||
         c == U'-' || c == U'_' || c == U'.' || c == U':';
}

struct ParsedMarker {
  bool begin;
  std::string name;
};

// Recognizes `begin #id` / `end #id`, optionally behind one extra leading
// `*` as in `(** begin #id *)`. Exactly one space precedes the `#`.
std::optional<ParsedMarker> parse_marker(TextView body) {
  body = trim(body);
  if (!body.empty() && body.front() == U'*') body = trim(body.substr(1));
  bool begin = false;
  if (body.starts_with(U"begin")) {
    begin = true;
    body.remove_prefix(5);
  } else if (body.starts_with(U"end")) {
    body.remove_prefix(3);
  } else {
    return std::nullopt;
  }
  if (!body.starts_with(U" #") || body.size() < 3) return std::nullopt;
  body.remove_prefix(2);
  for (char32_t c : body) {
    if (!is_id_char(c)) return std::nullopt;
  }
  return ParsedMarker{begin, to_utf8(body)};
}

Range line_around(TextView text, Range span) {
  std::size_t start = span.begin;
  while (start > 0 && text[start - 1] != U'\n') --start;
  std::size_t end = text.find(U'\n', span.end);
  end = end == TextView::npos ? text.size() : end + 1;
  return {start, end};
}

}  // namespace

SnippetError::SnippetError(Kind kind, std::string id)
    : std::runtime_error(kind_text(kind) + " '#" + id + "'"), kind_(kind), id_(std::move(id)) {}

MarkerScan scan_markers(TextView text, const LexResult& lexed) {
  MarkerScan scan;
  std::map<std::string, std::size_t> open;  // name -> index into scan.markers
  std::map<std::string, bool> seen;
  for (const auto& comment : lexed.comments) {
    const auto marker = parse_marker(text.substr(comment.body.begin, comment.body.size()));
    if (!marker) continue;
    MarkerLine line{marker->name, marker->begin, line_around(text, comment.range)};
    if (marker->begin) {
      if (seen.contains(marker->name)) {
        throw SnippetError(SnippetError::Kind::duplicate_name, marker->name);
      }
      seen[marker->name] = true;
      open[marker->name] = scan.markers.size();
      scan.markers.push_back(std::move(line));
      continue;
    }
    const auto it = open.find(marker->name);
    if (it == open.end()) throw SnippetError(SnippetError::Kind::unmatched_end, marker->name);
    const MarkerLine& begin_line = scan.markers[it->second];
    const std::size_t begin = begin_line.line.end;
    std::size_t end = line.line.begin;
    if (end > begin && text[end - 1] == U'\n') --end;
    if (end < begin) end = begin;
    scan.snippets.push_back(SnippetDef{marker->name, begin, end});
    open.erase(it);
    scan.markers.push_back(std::move(line));
  }
  if (!open.empty()) {
    // Report the earliest dangling begin marker.
    std::size_t first = scan.markers.size();
    for (const auto& [name, index] : open) first = std::min(first, index);
    throw SnippetError(SnippetError::Kind::unmatched_begin, scan.markers[first].name);
  }
  std::sort(scan.snippets.begin(), scan.snippets.end(),
            [](const SnippetDef& a, const SnippetDef& b) { return a.begin_offset < b.begin_offset; });
  return scan;
}

std::vector<SnippetDef> extract_snippets(TextView text, const LanguageSyntax& syntax) {
  return scan_markers(text, lex(text, syntax)).snippets;
}

}  // namespace cobra::snippets
