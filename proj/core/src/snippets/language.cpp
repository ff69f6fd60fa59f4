#include "cobra/snippets/language.hpp"

#include <algorithm>

namespace cobra::snippets {

std::span<const LanguageSyntax> languages() {
  static const std::vector<LanguageSyntax> table = {
      {"isabelle", U"(*", U"*)", std::nullopt, true, {"thy"}},
      {"scala", U"/*", U"*/", U"//", false, {"scala", "sc"}},
      {"haskell", U"{-", U"-}", U"--", true, {"hs", "lhs"}},
      {"demo", U"/*", U"*/", U"//", false, {"demo"}},
  };
  return table;
}

const LanguageSyntax* find_language(std::string_view id) {
  for (const auto& lang : languages()) {
    if (lang.id == id) return &lang;
  }
  return nullptr;
}

const LanguageSyntax* language_for_path(std::string_view path) {
  const auto slash = path.find_last_of('/');
  const auto name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot == std::string_view::npos) return nullptr;
  const auto ext = name.substr(dot + 1);
  for (const auto& lang : languages()) {
    if (std::find(lang.extensions.begin(), lang.extensions.end(), ext) != lang.extensions.end()) {
      return &lang;
    }
  }
  return nullptr;
}

std::vector<std::string> language_ids() {
  std::vector<std::string> ids;
  for (const auto& lang : languages()) ids.push_back(lang.id);
  return ids;
}

}  // namespace cobra::snippets
