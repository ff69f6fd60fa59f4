#include "cobra/config/config_tree.hpp"

#include <cctype>
#include <charconv>
#include <regex>

#include "cobra/text.hpp"

namespace cobra::config {

std::string_view ConfigValue::type_name() const {
  switch (value.index()) {
    case 0: return "string";
    case 1: return "integer";
    case 2: return "boolean";
    case 3: return "number";
    default: return "object";
  }
}

SyntaxError::SyntaxError(std::size_t line, std::size_t col, std::string message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      line_(line),
      col_(col),
      message_(std::move(message)) {}

PathConflict::PathConflict(std::string path, std::size_t line, std::size_t col)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                         ": conflicting assignment to '" + path + "'"),
      path_(std::move(path)),
      line_(line),
      col_(col) {}

std::vector<std::string> split_path(std::string_view dotted) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    out.emplace_back(dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

namespace {

std::string join(const std::vector<std::string>& path, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += '.';
    s += path[i];
  }
  return s;
}

void merge_into(ConfigObject& base, const ConfigObject& over) {
  for (const auto& [key, value] : over) {
    auto it = base.find(key);
    if (it != base.end() && it->second.is_object() && value.is_object()) {
      merge_into(std::get<ConfigObject>(it->second.value), std::get<ConfigObject>(value.value));
    } else {
      base[key] = value;
    }
  }
}

void collect(const ConfigObject& obj, const std::string& prefix,
             std::vector<std::pair<std::string, const ConfigValue*>>& out) {
  for (const auto& [key, value] : obj) {
    std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      collect(std::get<ConfigObject>(value.value), path, out);
    } else {
      out.emplace_back(std::move(path), &value);
    }
  }
}

}  // namespace

const ConfigValue* ConfigTree::find(std::string_view path) const {
  const ConfigObject* obj = &root_;
  const ConfigValue* found = nullptr;
  for (const auto& seg : split_path(path)) {
    if (!obj) return nullptr;
    auto it = obj->find(seg);
    if (it == obj->end()) return nullptr;
    found = &it->second;
    obj = found->is_object() ? &std::get<ConfigObject>(found->value) : nullptr;
  }
  return found;
}

void ConfigTree::set(const std::vector<std::string>& path, ConfigValue value) {
  ConfigObject* obj = &root_;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto it = obj->find(path[i]);
    if (it == obj->end()) {
      ConfigValue child{ConfigObject{}, "", value.line, value.col};
      it = obj->emplace(path[i], std::move(child)).first;
    } else if (!it->second.is_object()) {
      throw PathConflict(join(path, i + 1), value.line, value.col);
    }
    obj = &std::get<ConfigObject>(it->second.value);
  }
  auto it = obj->find(path.back());
  if (it == obj->end()) {
    obj->emplace(path.back(), std::move(value));
    return;
  }
  if (value.is_object()) {
    if (!it->second.is_object()) throw PathConflict(join(path, path.size()), value.line, value.col);
    merge_into(std::get<ConfigObject>(it->second.value), std::get<ConfigObject>(value.value));
    return;
  }
  it->second = std::move(value);
}

void ConfigTree::set(std::string_view dotted_path, ConfigValue value) {
  set(split_path(dotted_path), std::move(value));
}

std::vector<std::pair<std::string, const ConfigValue*>> ConfigTree::leaves() const {
  std::vector<std::pair<std::string, const ConfigValue*>> out;
  collect(root_, "", out);
  return out;
}

ConfigTree merge(const ConfigTree& base, const ConfigTree& over) {
  ConfigTree out = base;
  for (const auto& [path, value] : over.leaves()) {
    // Leaf-wise: an object in `base` replaced by a scalar is overridden.
    auto segs = split_path(path);
    ConfigObject* obj = &out.root_;
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
      auto& slot = (*obj)[segs[i]];
      if (!slot.is_object()) slot = ConfigValue{ConfigObject{}, "", value->line, value->col};
      obj = &std::get<ConfigObject>(slot.value);
    }
    (*obj)[segs.back()] = *value;
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::string source) : text_(text), tree_(std::move(source)) {}

  ConfigTree run() {
    skip_blank();
    bool braced = false;
    if (peek() == '{') {
      braced = true;
      advance();
    }
    parse_members({}, braced);
    if (braced) {
      if (peek() != '}') fail("expected '}'");
      advance();
    }
    skip_blank();
    if (!at_end()) fail("unexpected character '" + std::string(1, peek()) + "'");
    return std::move(tree_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  ConfigTree tree_;

  [[noreturn]] void fail(const std::string& message) { throw SyntaxError(line_, col_, message); }
  [[noreturn]] void fail_at(std::size_t line, std::size_t col, const std::string& message) {
    throw SyntaxError(line, col, message);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  void advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
  }

  bool at_comment() const { return peek() == '#' || (peek() == '/' && peek(1) == '/'); }
  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }
  void skip_inline() {
    while (!at_end()) {
      if (peek() == ' ' || peek() == '\t' || peek() == '\r') {
        advance();
      } else if (at_comment()) {
        skip_comment();
      } else {
        break;
      }
    }
  }
  void skip_blank() {
    while (!at_end()) {
      skip_inline();
      if (peek() == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  static bool key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::vector<std::string> parse_key() {
    std::vector<std::string> segs;
    while (true) {
      if (peek() == '"') {
        segs.push_back(parse_quoted());
        if (segs.back().empty()) fail("empty key segment");
        if (segs.back().find('.') != std::string::npos) fail("key segment contains '.'");
      } else {
        std::string seg;
        while (key_char(peek())) {
          seg += peek();
          advance();
        }
        if (seg.empty()) {
          if (at_end()) fail("expected a key");
          fail("unexpected character '" + std::string(1, peek()) + "' in key");
        }
        segs.push_back(std::move(seg));
      }
      if (peek() != '.') break;
      advance();
    }
    return segs;
  }

  std::string parse_quoted() {
    const std::size_t line = line_, col = col_;
    advance();  // opening quote
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail_at(line, col, "unterminated string");
      const char c = peek();
      advance();
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail_at(line, col, "unterminated string");
      const char e = peek();
      advance();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          std::uint32_t cp = 0;
          for (int i = 0; i < 4; ++i) {
            const char h = peek();
            if (!std::isxdigit(static_cast<unsigned char>(h))) fail("invalid \\u escape");
            cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                          ? h - '0'
                                                          : std::tolower(h) - 'a' + 10);
            advance();
          }
          if (cp >= 0xD800 && cp <= 0xDFFF) fail("invalid \\u escape");
          out += to_utf8(static_cast<char32_t>(cp));
          break;
        }
        default: fail(std::string("invalid escape '\\") + e + "'");
      }
    }
    return out;
  }

  ConfigValue parse_unquoted() {
    const std::size_t line = line_, col = col_;
    std::string raw;
    while (!at_end()) {
      const char c = peek();
      if (c == '\n' || c == ',' || c == '}' || c == '#' || (c == '/' && peek(1) == '/')) break;
      if (c == '[' || c == ']') fail("arrays are not supported");
      if (c == '$') fail("substitutions are not supported");
      if (c == '{' || c == '"' || c == '=' || c == ':') {
        fail("unexpected character '" + std::string(1, c) + "' in value");
      }
      raw += c;
      advance();
    }
    while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r')) {
      raw.pop_back();
    }
    if (raw.empty()) fail_at(line, col, "expected a value");

    ConfigValue v{raw, raw, line, col};
    if (raw == "true") {
      v.value = true;
    } else if (raw == "false") {
      v.value = false;
    } else {
      static const std::regex integer("-?[0-9]+");
      static const std::regex number("-?[0-9]+(\\.[0-9]+)?([eE][-+]?[0-9]+)?");
      if (std::regex_match(raw, integer)) {
        std::int64_t n = 0;
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), n);
        if (ec == std::errc{} && ptr == raw.data() + raw.size()) v.value = n;
      } else if (std::regex_match(raw, number)) {
        v.value = std::stod(raw);
      }
    }
    return v;
  }

  ConfigValue parse_object() {
    const std::size_t line = line_, col = col_;
    advance();  // '{'
    ConfigTree saved = std::move(tree_);
    tree_ = ConfigTree{};
    parse_members({}, true);
    if (peek() != '}') fail_at(line, col, "unclosed '{'");
    advance();
    ConfigValue v{ConfigObject(tree_.root()), "", line, col};
    tree_ = std::move(saved);
    return v;
  }

  void parse_members(const std::vector<std::string>& prefix, bool braced) {
    (void)prefix;
    while (true) {
      skip_blank();
      if (at_end() || (braced && peek() == '}')) return;
      const std::size_t line = line_, col = col_;
      if (text_.substr(pos_, 8) == "include " || text_.substr(pos_, 8) == "include\"") {
        fail("include is not supported");
      }
      auto key = parse_key();
      skip_inline();
      ConfigValue value;
      if (peek() == '{') {
        value = parse_object();
      } else if (peek() == '=' || peek() == ':') {
        advance();
        skip_inline();
        if (peek() == '{') {
          value = parse_object();
        } else if (peek() == '"') {
          const std::size_t vl = line_, vc = col_;
          std::string s = parse_quoted();
          value = ConfigValue{s, s, vl, vc};
        } else if (peek() == '[') {
          fail("arrays are not supported");
        } else {
          value = parse_unquoted();
        }
      } else if (at_end() || peek() == '\n') {
        fail("expected '=' or ':' after key");
      } else {
        fail("expected '=' or ':' after key, found '" + std::string(1, peek()) + "'");
      }
      value.line = line;
      value.col = col;
      tree_.set(key, std::move(value));

      skip_inline();
      if (peek() == ',') {
        advance();
      } else if (peek() == '\n') {
        advance();
      } else if (at_end() || (braced && peek() == '}')) {
        return;
      } else {
        fail("expected a newline or ',' after value");
      }
    }
  }
};

}  // namespace

ConfigTree parse_config(std::string_view text, std::string source) {
  return Parser(text, std::move(source)).run();
}

}  // namespace cobra::config
