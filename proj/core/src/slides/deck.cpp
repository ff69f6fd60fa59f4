#include "cobra/slides/deck.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

#include "cobra/snippets/language.hpp"

namespace cobra::slides {

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

std::vector<std::string> split_classes(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

const Attribute* find_attr(const std::vector<Attribute>& attrs, std::string_view name) {
  for (const auto& a : attrs) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

// Position just past the next unescaped `delim` at or after `from`.
std::optional<std::size_t> find_closing(std::string_view s, std::size_t from, std::string_view delim) {
  for (std::size_t i = from; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == '$') {
      ++i;
      continue;
    }
    if (s.substr(i, delim.size()) == delim) return i;
  }
  return std::nullopt;
}

CodeBlock make_code_block(const HtmlToken& tag, std::size_t& inline_count) {
  CodeBlock block;
  block.attributes = tag.attributes;
  if (const Attribute* c = find_attr(tag.attributes, "class")) block.classes = split_classes(c->value);
  for (const auto& c : block.classes) {
    if (snippets::find_language(c) != nullptr) {
      block.language = c;
      break;
    }
  }
  const Attribute* src = find_attr(tag.attributes, "src");
  if (src != nullptr && !src->value.empty() && src->value[0] == '#') {
    block.source = CodeBlock::Source::snippet;
    block.src = src->value.substr(1);
    block.id = "snip-" + block.src;
  } else if (src != nullptr && !src->value.empty()) {
    block.source = CodeBlock::Source::file;
    block.src = normalize_src_path(src->value);
    block.id = "file-" + block.src;
    if (block.language.empty()) {
      if (const auto* lang = snippets::language_for_path(block.src)) block.language = lang->id;
    }
  } else {
    block.source = CodeBlock::Source::inline_text;
    block.id = "inline-" + std::to_string(inline_count++);
  }
  return block;
}

class Builder {
 public:
  Deck build(std::string_view html) {
    const auto tokens = tokenize_html(html);
    frames_.push_back(Frame{Frame::top_level, {}, {}, 1, 1});
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const HtmlToken& t = tokens[i];
      switch (t.kind) {
        case HtmlToken::Kind::text: text(t); break;
        case HtmlToken::Kind::comment: children().push_back(Node{CommentNode{t.data}}); break;
        case HtmlToken::Kind::doctype: break;
        case HtmlToken::Kind::start_tag:
          if (t.name == "code") {
            i = code(tokens, i);
          } else {
            start(t);
          }
          break;
        case HtmlToken::Kind::end_tag: end(t.name); break;
      }
    }
    for (const auto& f : frames_) {
      if (f.kind == Frame::slide_frame && f.depth == 1) {
        throw ParseError(f.line, f.col, "unclosed <section>");
      }
    }
    while (frames_.size() > 1) close_top();
    deck_.top = std::move(frames_[0].element.children);
    return std::move(deck_);
  }

 private:
  struct Frame {
    enum Kind { top_level, element_frame, slide_frame } kind;
    Element element;
    Slide slide;
    std::size_t line;
    std::size_t col;
    int depth = 0;  // slide nesting level for slide frames
  };

  Deck deck_;
  std::vector<Frame> frames_;
  std::size_t inline_count_ = 0;

  std::vector<Node>& children() {
    Frame& f = frames_.back();
    return f.kind == Frame::slide_frame ? f.slide.children : f.element.children;
  }

  int slide_depth() const {
    int d = 0;
    for (const auto& f : frames_) d = std::max(d, f.kind == Frame::slide_frame ? f.depth : 0);
    return d;
  }

  bool in_raw_element() const {
    const Frame& f = frames_.back();
    return f.kind == Frame::element_frame && (f.element.name == "script" || f.element.name == "style");
  }

  void text(const HtmlToken& t) {
    if (frames_.size() == 1 && blank(t.data)) return;
    if (in_raw_element()) {
      children().push_back(Node{TextNode{t.data}});
      return;
    }
    for (auto& piece : split_math(t.data)) {
      if (auto* s = std::get_if<std::string>(&piece)) {
        children().push_back(Node{TextNode{std::move(*s)}});
      } else {
        children().push_back(Node{MathNode{std::get<MathSpan>(piece)}});
      }
    }
  }

  std::size_t code(const std::vector<HtmlToken>& tokens, std::size_t i) {
    const HtmlToken& tag = tokens[i];
    CodeBlock block = make_code_block(tag, inline_count_);
    std::string content;
    if (!tag.self_closing) {
      if (i + 1 < tokens.size() && tokens[i + 1].kind == HtmlToken::Kind::text) {
        content = tokens[++i].data;
      }
      if (i + 1 < tokens.size() && tokens[i + 1].kind == HtmlToken::Kind::end_tag &&
          tokens[i + 1].name == "code") {
        ++i;
      }
    }
    if (block.source == CodeBlock::Source::inline_text) {
      block.inline_text = normalize_code(decode_entities(content));
    }
    const std::size_t index = deck_.code_blocks.size();
    deck_.code_blocks.push_back(std::move(block));
    if (frames_.size() == 1) deck_.hidden_code.push_back(index);
    children().push_back(Node{CodeNode{index}});
    return i;
  }

  void start(const HtmlToken& t) {
    if (t.name == "section") {
      const int depth = slide_depth();
      if (depth >= 2) throw StructureError(t.line, t.col, "sections nest at most two levels deep");
      if (depth == 1 || frames_.size() == 1) {
        Frame f{Frame::slide_frame, {}, {}, t.line, t.col, depth + 1};
        f.slide.attributes = t.attributes;
        frames_.push_back(std::move(f));
        if (t.self_closing) close_top();
        return;
      }
    }
    Frame f{Frame::element_frame, {}, {}, t.line, t.col};
    f.element.name = t.name;
    f.element.attributes = t.attributes;
    frames_.push_back(std::move(f));
    if (t.self_closing || is_void_element(t.name)) close_top();
  }

  void end(const std::string& name) {
    for (std::size_t k = frames_.size(); k-- > 1;) {
      const Frame& f = frames_[k];
      const bool match = f.kind == Frame::slide_frame ? name == "section" : f.element.name == name;
      if (!match) continue;
      while (frames_.size() > k) close_top();
      return;
    }
  }

  void close_top() {
    Frame f = std::move(frames_.back());
    frames_.pop_back();
    if (f.kind == Frame::element_frame) {
      children().push_back(Node{std::move(f.element)});
      return;
    }
    if (f.depth == 1) {
      children().push_back(Node{SlideSlot{deck_.slides.size()}});
      deck_.slides.push_back(std::move(f.slide));
      return;
    }
    Frame* owner = nullptr;
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      if (it->kind == Frame::slide_frame) {
        owner = &*it;
        break;
      }
    }
    children().push_back(Node{SlideSlot{owner->slide.vertical.size()}});
    owner->slide.vertical.push_back(std::move(f.slide));
  }
};

void render_attributes(std::string& out, const std::vector<Attribute>& attrs) {
  for (const auto& a : attrs) {
    out += ' ';
    out += a.name;
    if (a.has_value) {
      out += "=\"";
      out += escape_html(a.value);
      out += '"';
    }
  }
}

void render_text(std::string& out, std::string_view text) {
  for (char c : text) {
    if (c == '$') out += '\\';
    out += c;
  }
}

class Renderer {
 public:
  explicit Renderer(const Deck& deck) : deck_(deck) {}

  std::string run() {
    for (const auto& n : deck_.top) {
      node(n, nullptr);
      out_ += '\n';
    }
    return std::move(out_);
  }

 private:
  const Deck& deck_;
  std::string out_;

  void slide(const Slide& s) {
    out_ += "<section";
    render_attributes(out_, s.attributes);
    out_ += '>';
    for (const auto& n : s.children) node(n, &s);
    out_ += "</section>";
  }

  void node(const Node& n, const Slide* owner) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Element>) {
            out_ += '<' + v.name;
            render_attributes(out_, v.attributes);
            out_ += '>';
            if (is_void_element(v.name)) return;
            const bool raw = v.name == "script" || v.name == "style";
            for (const auto& c : v.children) {
              if (raw) {
                if (const auto* t = std::get_if<TextNode>(&c.value)) {
                  out_ += t->text;
                  continue;
                }
              }
              node(c, owner);
            }
            out_ += "</" + v.name + '>';
          } else if constexpr (std::is_same_v<T, TextNode>) {
            render_text(out_, v.text);
          } else if constexpr (std::is_same_v<T, MathNode>) {
            const char* d = v.math.display ? "$$" : "$";
            out_ += d + v.math.tex + d;
          } else if constexpr (std::is_same_v<T, CodeNode>) {
            const CodeBlock& b = deck_.code_blocks[v.block];
            out_ += "<code";
            render_attributes(out_, b.attributes);
            out_ += '>';
            if (b.source == CodeBlock::Source::inline_text && !b.inline_text.empty()) {
              out_ += '\n' + escape_html(b.inline_text) + '\n';
            }
            out_ += "</code>";
          } else if constexpr (std::is_same_v<T, SlideSlot>) {
            slide(owner == nullptr ? deck_.slides[v.index] : owner->vertical[v.index]);
          } else {
            out_ += "<!--" + v.text + "-->";
          }
        },
        n.value);
  }
};

std::set<std::size_t> hidden_blocks(const Deck& deck) {
  std::set<std::size_t> out(deck.hidden_code.begin(), deck.hidden_code.end());
  for (std::size_t i = 0; i < deck.code_blocks.size(); ++i) {
    if (deck.code_blocks[i].hidden()) out.insert(i);
  }
  return out;
}

}  // namespace

std::vector<TextPiece> split_math(std::string_view s) {
  std::vector<TextPiece> out;
  std::string text;
  const auto flush = [&] {
    if (!text.empty()) out.emplace_back(std::move(text));
    text.clear();
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == '$') {
      text += '$';
      i += 2;
      continue;
    }
    if (s[i] != '$') {
      text += s[i++];
      continue;
    }
    if (i + 1 < s.size() && s[i + 1] == '$') {
      if (auto close = find_closing(s, i + 2, "$$"); close && *close > i + 2) {
        flush();
        out.emplace_back(MathSpan{std::string(s.substr(i + 2, *close - i - 2)), true});
        i = *close + 2;
        continue;
      }
    }
    if (auto close = find_closing(s, i + 1, "$"); close && *close > i + 1) {
      flush();
      out.emplace_back(MathSpan{std::string(s.substr(i + 1, *close - i - 1)), false});
      i = *close + 1;
      continue;
    }
    text += '$';
    ++i;
  }
  flush();
  return out;
}

bool CodeBlock::has_class(std::string_view c) const {
  return std::find(classes.begin(), classes.end(), c) != classes.end();
}

StructureError::StructureError(std::size_t line, std::size_t col, std::string message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      line_(line),
      col_(col) {}

Deck parse_slides(std::string_view html) { return Builder().build(html); }

std::string render_slides(const Deck& deck) { return Renderer(deck).run(); }

std::string normalize_code(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const auto nl = text.find('\n', start);
    std::string line(text.substr(start, nl == std::string_view::npos ? text.npos : nl - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && blank(lines.front())) lines.erase(lines.begin());
  while (!lines.empty() && blank(lines.back())) lines.pop_back();
  std::size_t indent = std::string::npos;
  for (const auto& l : lines) {
    if (blank(l)) continue;
    indent = std::min(indent, l.find_first_not_of(" \t"));
  }
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += '\n';
    const auto& l = lines[i];
    out += l.substr(std::min(indent, l.size()));
  }
  return out;
}

std::string normalize_src_path(std::string_view path) {
  std::string p = std::filesystem::path(path).lexically_normal().generic_string();
  while (p.rfind("./", 0) == 0) p.erase(0, 2);
  return p;
}

std::vector<CodeSource> collect_sources(const Deck& deck, const std::filesystem::path& base_dir) {
  std::vector<CodeSource> out;
  std::set<std::string> seen;
  for (const auto& b : deck.code_blocks) {
    if (b.source == CodeBlock::Source::snippet || !seen.insert(b.id).second) continue;
    CodeSource s;
    s.id = b.id;
    s.kind = b.source;
    s.language = b.language;
    if (b.source == CodeBlock::Source::file) {
      s.path = base_dir / b.src;
      if (!std::filesystem::is_regular_file(s.path)) throw MissingFile(s.path);
    } else {
      s.text = b.inline_text;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CodeRef> collect_code_refs(const Deck& deck, const SnippetIndex& snippets) {
  std::vector<CodeRef> out;
  const auto hidden = hidden_blocks(deck);
  for (std::size_t i = 0; i < deck.code_blocks.size(); ++i) {
    if (hidden.contains(i)) continue;
    const CodeBlock& b = deck.code_blocks[i];
    CodeRef ref{i, b.id, b.source, b.id, std::nullopt, b.language};
    if (b.source == CodeBlock::Source::snippet) {
      auto it = snippets.find(b.src);
      if (it == snippets.end()) throw UnresolvedSnippet(b.src);
      ref.source_id = it->second.source_id;
      ref.snippet = b.src;
      ref.language = it->second.language;
    }
    out.push_back(std::move(ref));
  }
  return out;
}

std::string boot_config(const Deck& deck, const config::Settings& settings,
                        const std::vector<CodeRef>& refs, const std::vector<BootDocument>& documents) {
  using nlohmann::json;
  json reveal = json::object();
  json mathjax = json::object();
  for (const auto& [path, value] : settings.passthrough) {
    json v;
    std::visit([&](const auto& x) { v = x; }, value);
    if (path.rfind("reveal.", 0) == 0) {
      reveal[path.substr(7)] = v;
    } else {
      mathjax[path.substr(8)] = v;
    }
  }
  reveal["transition"] = std::string(config::to_string(settings.reveal_transition));

  json code = json::array();
  for (const auto& r : refs) {
    const CodeBlock& b = deck.code_blocks[r.block];
    json fragments = json::array();
    for (const auto& d : documents) {
      if (d.id != r.id) continue;
      for (const auto& f : d.fragments) {
        fragments.push_back({{"index", f.index},
                             {"variants", f.variants},
                             {"live", f.live},
                             {"active", f.active},
                             {"selection", f.selection}});
      }
    }
    code.push_back({{"block", r.block},
                    {"doc", r.id},
                    {"source", r.source_id},
                    {"language", r.language},
                    {"classes", b.classes},
                    {"fragments", fragments}});
  }
  json boot = {
      {"protocolVersion", 1},
      {"title", settings.title},
      {"websocket", "/ws"},
      {"theme", {{"slides", settings.theme_slides}, {"code", settings.theme_code}}},
      {"show", {{"infos", settings.show_infos}, {"warnings", settings.show_warnings}}},
      {"reveal", reveal},
      {"mathjax", mathjax},
      {"code", code},
  };
  return boot.dump();
}

std::string render_boilerplate(const Deck& deck, const config::Settings& settings,
                               const std::vector<CodeRef>& refs,
                               const std::vector<BootDocument>& documents) {
  std::string boot = boot_config(deck, settings, refs, documents);
  // Keep the JSON from closing its script element.
  for (std::size_t p = boot.find("</"); p != std::string::npos; p = boot.find("</", p)) {
    boot.replace(p, 2, "<\\/");
  }
  std::string page;
  page += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
  page += "<title>" + escape_html(settings.title) + "</title>\n";
  page += "<link rel=\"stylesheet\" href=\"/client/cobra.css\">\n";
  page += "<script id=\"cobra-boot\" type=\"application/json\">" + boot + "</script>\n";
  page += "</head>\n<body>\n<div class=\"reveal\">\n<div class=\"slides\">\n";
  page += render_slides(deck);
  page += "</div>\n</div>\n<script src=\"/client/cobra.js\"></script>\n</body>\n</html>\n";
  return page;
}

}  // namespace cobra::slides
