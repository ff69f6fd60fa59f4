#include "cobra/slides/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "cobra/text.hpp"

namespace cobra::slides {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

bool raw_text_element(std::string_view name) {
  return name == "code" || name == "script" || name == "style";
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view html) : s_(html) {}

  std::vector<HtmlToken> run() {
    while (pos_ < s_.size()) {
      if (s_[pos_] == '<') {
        if (s_.substr(pos_, 4) == "<!--") {
          comment();
          continue;
        }
        if (s_.substr(pos_, 2) == "<!") {
          doctype();
          continue;
        }
        if (pos_ + 1 < s_.size() && is_alpha(s_[pos_ + 1])) {
          tag(false);
          continue;
        }
        if (s_.substr(pos_, 2) == "</" && pos_ + 2 < s_.size() && is_alpha(s_[pos_ + 2])) {
          tag(true);
          continue;
        }
      }
      text_run();
    }
    flush_text();
    return std::move(tokens_);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::vector<HtmlToken> tokens_;
  std::string text_;
  std::size_t text_line_ = 1;
  std::size_t text_col_ = 1;

  void advance(std::size_t n = 1) {
    for (; n > 0 && pos_ < s_.size(); --n) {
      const char c = s_[pos_++];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  void flush_text() {
    if (text_.empty()) return;
    HtmlToken t;
    t.kind = HtmlToken::Kind::text;
    t.data = std::move(text_);
    t.line = text_line_;
    t.col = text_col_;
    tokens_.push_back(std::move(t));
    text_.clear();
  }

  void text_run() {
    if (text_.empty()) {
      text_line_ = line_;
      text_col_ = col_;
    }
    text_ += s_[pos_];
    advance();
  }

  HtmlToken start_token(HtmlToken::Kind kind) {
    flush_text();
    HtmlToken t;
    t.kind = kind;
    t.line = line_;
    t.col = col_;
    return t;
  }

  void comment() {
    HtmlToken t = start_token(HtmlToken::Kind::comment);
    advance(4);
    const auto end = s_.find("-->", pos_);
    const std::size_t stop = end == std::string_view::npos ? s_.size() : end;
    t.data = std::string(s_.substr(pos_, stop - pos_));
    advance(stop - pos_);
    if (end != std::string_view::npos) advance(3);
    tokens_.push_back(std::move(t));
  }

  void doctype() {
    HtmlToken t = start_token(HtmlToken::Kind::doctype);
    advance(2);
    const auto end = s_.find('>', pos_);
    if (end == std::string_view::npos) throw ParseError(t.line, t.col, "unterminated declaration");
    t.data = std::string(s_.substr(pos_, end - pos_));
    advance(end - pos_ + 1);
    tokens_.push_back(std::move(t));
  }

  void skip_ws() {
    while (pos_ < s_.size() && is_ws(s_[pos_])) advance();
  }

  void tag(bool end) {
    HtmlToken t = start_token(end ? HtmlToken::Kind::end_tag : HtmlToken::Kind::start_tag);
    advance(end ? 2 : 1);
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '-' || s_[pos_] == ':' || s_[pos_] == '_')) {
      t.name += lower(s_[pos_]);
      advance();
    }
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) throw ParseError(t.line, t.col, "unterminated <" + t.name + "> tag");
      const char c = s_[pos_];
      if (c == '>') {
        advance();
        break;
      }
      if (c == '/' && s_.substr(pos_, 2) == "/>") {
        t.self_closing = true;
        advance(2);
        break;
      }
      if (c == '/') {
        advance();
        continue;
      }
      attribute(t);
    }
    const std::string name = t.name;
    const bool raw = !end && !t.self_closing && raw_text_element(name);
    tokens_.push_back(std::move(t));
    if (raw) raw_text(name);
  }

  void attribute(HtmlToken& t) {
    const std::size_t line = line_, col = col_;
    Attribute a;
    while (pos_ < s_.size() && !is_ws(s_[pos_]) && s_[pos_] != '>' && s_[pos_] != '=' &&
           s_.substr(pos_, 2) != "/>") {
      const char c = s_[pos_];
      if (c == '"' || c == '\'' || c == '<') {
        throw ParseError(line_, col_, std::string("unexpected ") + c + " in attribute name");
      }
      a.name += lower(c);
      advance();
    }
    if (a.name.empty()) throw ParseError(line, col, "attribute value without a name");
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '=') {
      advance();
      skip_ws();
      if (pos_ >= s_.size()) throw ParseError(line, col, "attribute '" + a.name + "' has no value");
      a.has_value = true;
      const char q = s_[pos_];
      if (q == '"' || q == '\'') {
        const auto close = s_.find(q, pos_ + 1);
        if (close == std::string_view::npos) {
          throw ParseError(line, col, "unterminated value of attribute '" + a.name + "'");
        }
        a.value = decode_entities(s_.substr(pos_ + 1, close - pos_ - 1));
        advance(close - pos_ + 1);
      } else {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && !is_ws(s_[pos_]) && s_[pos_] != '>') {
          const char c = s_[pos_];
          if (c == '"' || c == '\'' || c == '<' || c == '=' || c == '`') {
            throw ParseError(line_, col_, "unexpected " + std::string(1, c) + " in unquoted value");
          }
          advance();
        }
        if (pos_ == start) throw ParseError(line, col, "attribute '" + a.name + "' has no value");
        a.value = decode_entities(s_.substr(start, pos_ - start));
      }
    }
    t.attributes.push_back(std::move(a));
  }

  // Content of a raw-text element up to its end tag (case-insensitive).
  void raw_text(const std::string& name) {
    const std::string closing = "</" + name;
    std::size_t p = pos_;
    while (true) {
      p = s_.find("</", p);
      if (p == std::string_view::npos) break;
      bool match = p + closing.size() <= s_.size();
      for (std::size_t k = 0; match && k < closing.size(); ++k) {
        match = lower(s_[p + k]) == closing[k];
      }
      if (match) {
        const std::size_t after = p + closing.size();
        if (after == s_.size() || is_ws(s_[after]) || s_[after] == '>' || s_[after] == '/') break;
      }
      p += 2;
    }
    const std::size_t stop = p == std::string_view::npos ? s_.size() : p;
    if (stop > pos_) {
      text_line_ = line_;
      text_col_ = col_;
      text_ = std::string(s_.substr(pos_, stop - pos_));
      advance(stop - pos_);
      flush_text();
    }
  }
};

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t col, std::string message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      line_(line),
      col_(col),
      message_(std::move(message)) {}

std::vector<HtmlToken> tokenize_html(std::string_view html) { return Tokenizer(html).run(); }

bool is_void_element(std::string_view name) {
  static constexpr std::array<std::string_view, 14> kVoid{
      "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param",
      "source", "track", "wbr"};
  return std::find(kVoid.begin(), kVoid.end(), name) != kVoid.end();
}

std::string decode_entities(std::string_view s) {
  static constexpr std::pair<std::string_view, std::string_view> kNamed[] = {
      {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"}, {"nbsp", "\xC2\xA0"}};
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += s[i++];
      continue;
    }
    const std::string_view ref = s.substr(i + 1, semi - i - 1);
    bool done = false;
    if (!ref.empty() && ref[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (!digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size() &&
          cp <= 0x10FFFF && (cp < 0xD800 || cp > 0xDFFF) && cp != 0) {
        out += to_utf8(static_cast<char32_t>(cp));
        done = true;
      }
    } else {
      for (const auto& [name, value] : kNamed) {
        if (ref == name) {
          out += value;
          done = true;
          break;
        }
      }
    }
    if (done) {
      i = semi + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::string escape_html(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace cobra::slides
