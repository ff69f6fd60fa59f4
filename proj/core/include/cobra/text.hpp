#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace cobra {

/// Document text. Offsets everywhere in the synchronization and snippet
/// layers count Unicode scalar values, so documents are held as UTF-32.
using Text = std::u32string;
using TextView = std::u32string_view;

/// Half-open character range [begin, end).
struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;

  [[nodiscard]] std::size_t size() const { return end - begin; }
  [[nodiscard]] bool empty() const { return begin == end; }
  [[nodiscard]] bool contains(std::size_t pos) const { return pos >= begin && pos < end; }

  friend bool operator==(const Range&, const Range&) = default;
};

/// Decodes UTF-8. Throws std::invalid_argument on malformed input
/// (overlong forms, surrogates, truncated sequences).
Text from_utf8(std::string_view utf8);

std::string to_utf8(TextView text);
std::string to_utf8(char32_t c);

/// Returns the byte offset of the first invalid sequence, or npos.
std::size_t find_invalid_utf8(std::string_view utf8);

inline bool is_valid_utf8(std::string_view utf8) {
  return find_invalid_utf8(utf8) == std::string_view::npos;
}

/// Number of scalar values in a valid UTF-8 string.
std::size_t utf8_length(std::string_view utf8);

bool is_space(char32_t c);

}  // namespace cobra
