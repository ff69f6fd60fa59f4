#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobra/snippets/comments.hpp"
#include "cobra/snippets/language.hpp"
#include "cobra/text.hpp"

namespace cobra::snippets {

/// A named range delimited by `begin #name` / `end #name` marker comments.
/// The range excludes both marker lines and the line break in front of the
/// end marker.
struct SnippetDef {
  std::string name;
  std::size_t begin_offset = 0;
  std::size_t end_offset = 0;

  [[nodiscard]] Range range() const { return {begin_offset, end_offset}; }
  friend bool operator==(const SnippetDef&, const SnippetDef&) = default;
};

/// The full line holding a marker comment, including its line break.
struct MarkerLine {
  std::string name;
  bool begin = true;
  Range line;
  friend bool operator==(const MarkerLine&, const MarkerLine&) = default;
};

class SnippetError : public std::runtime_error {
 public:
  enum class Kind { unmatched_begin, unmatched_end, duplicate_name };

  SnippetError(Kind kind, std::string id);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::string& id() const { return id_; }

 private:
  Kind kind_;
  std::string id_;
};

struct MarkerScan {
  std::vector<MarkerLine> markers;
  std::vector<SnippetDef> snippets;  ///< Ordered by begin marker position.
};

/// Pairs marker comments into snippets. Throws SnippetError.
MarkerScan scan_markers(TextView text, const LexResult& lexed);

std::vector<SnippetDef> extract_snippets(TextView text, const LanguageSyntax& syntax);

}  // namespace cobra::snippets
