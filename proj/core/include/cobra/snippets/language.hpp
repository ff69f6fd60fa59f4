#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cobra/text.hpp"

namespace cobra::snippets {

/// Comment syntax of a presentable language.
struct LanguageSyntax {
  std::string id;
  Text block_open;
  Text block_close;
  std::optional<Text> line_comment;
  bool nesting = false;
  /// File extensions (without the dot) that select this language.
  std::vector<std::string> extensions;
};

/// Built-in languages: isabelle, scala, haskell and demo.
std::span<const LanguageSyntax> languages();

const LanguageSyntax* find_language(std::string_view id);

/// Looks up a language by the extension of `path` ("src/Seq.thy" -> isabelle).
const LanguageSyntax* language_for_path(std::string_view path);

std::vector<std::string> language_ids();

}  // namespace cobra::snippets
