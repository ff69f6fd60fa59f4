#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobra/snippets/comments.hpp"
#include "cobra/snippets/language.hpp"
#include "cobra/text.hpp"

namespace cobra::snippets {

struct FragmentVariant {
  Range range;  ///< Raw text of the variant; inside a comment body unless live.
  Text text;
  bool live = false;
  friend bool operator==(const FragmentVariant&, const FragmentVariant&) = default;
};

/// A code fragment written with comment scaffolding, e.g.
/// `/*(*/???/*|3 * 7)*/`. Exactly one variant is live (outside comments).
struct Fragment {
  enum class Kind { staged, selection };

  Range whole;
  std::vector<FragmentVariant> variants;

  [[nodiscard]] Kind kind() const { return variants.size() >= 2 ? Kind::staged : Kind::selection; }
  [[nodiscard]] std::size_t live_index() const;
  friend bool operator==(const Fragment&, const Fragment&) = default;
};

class MalformedFragment : public std::runtime_error {
 public:
  MalformedFragment(std::size_t offset, std::string reason);

  [[nodiscard]] std::size_t offset() const { return offset_; }
  [[nodiscard]] const std::string& reason() const { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

/// Finds fragment constructs. An opening comment's body starts with `(`
/// and ends with `(` or `|`; the live variant follows it; a closing
/// comment's body starts with `|` or `)` and ends with the closing `)`.
/// Pipes and the closing paren only count at parenthesis depth zero, so
/// dead variants may contain balanced parentheses. Comments inside the live
/// variant that do not start with `|` or `)` belong to the live code.
/// Throws MalformedFragment.
std::vector<Fragment> parse_fragments(TextView text, const LexResult& lexed);

std::vector<Fragment> parse_fragments(TextView text, const LanguageSyntax& syntax);

}  // namespace cobra::snippets
