#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cobra::slides {

struct Attribute {
  std::string name;   ///< Lowercase.
  std::string value;  ///< Entity-decoded.
  bool has_value = false;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct HtmlToken {
  enum class Kind { start_tag, end_tag, text, comment, doctype };
  Kind kind = Kind::text;
  std::string name;  ///< Lowercase tag name for tags.
  std::vector<Attribute> attributes;
  bool self_closing = false;
  std::string data;  ///< Raw text, comment body or doctype body.
  std::size_t line = 1;
  std::size_t col = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t col, std::string message);

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t col() const { return col_; }
  [[nodiscard]] const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t col_;
  std::string message_;
};

/// Splits HTML into tokens. Tolerant: a `<` that does not start a tag is
/// text, and an unterminated comment runs to the end. The content of
/// `code`, `script` and `style` is raw text ended only by the matching end
/// tag. Throws ParseError for malformed attributes and unterminated tags.
std::vector<HtmlToken> tokenize_html(std::string_view html);

bool is_void_element(std::string_view name);

/// Decodes named (amp, lt, gt, quot, apos, nbsp) and numeric references.
/// Unknown references are left as written.
std::string decode_entities(std::string_view s);

/// Escapes `&`, `<`, `>` and `"`.
std::string escape_html(std::string_view s);

}  // namespace cobra::slides
