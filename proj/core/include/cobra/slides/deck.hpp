#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cobra/config/settings.hpp"
#include "cobra/slides/html.hpp"

namespace cobra::slides {

struct MathSpan {
  std::string tex;
  bool display = false;
  friend bool operator==(const MathSpan&, const MathSpan&) = default;
};

/// Text with `\$` unescaped, or a formula.
using TextPiece = std::variant<std::string, MathSpan>;

/// Splits text into plain runs and `$...$` / `$$...$$` formulas. `\$` is a
/// literal dollar outside formulas and is skipped when looking for a closing
/// delimiter. A `$` without a partner stays text. Empty formulas are text.
std::vector<TextPiece> split_math(std::string_view text);

struct Node;

struct Element {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<Node> children;
  friend bool operator==(const Element&, const Element&) = default;
};

struct TextNode {
  std::string text;  ///< As written, entities included; never contains a formula.
  friend bool operator==(const TextNode&, const TextNode&) = default;
};

struct MathNode {
  MathSpan math;
  friend bool operator==(const MathNode&, const MathNode&) = default;
};

/// Position of Deck::code_blocks[block].
struct CodeNode {
  std::size_t block = 0;
  friend bool operator==(const CodeNode&, const CodeNode&) = default;
};

/// Position of a slide: Deck::slides[index] at the top level, or
/// Slide::vertical[index] inside a slide.
struct SlideSlot {
  std::size_t index = 0;
  friend bool operator==(const SlideSlot&, const SlideSlot&) = default;
};

struct CommentNode {
  std::string text;
  friend bool operator==(const CommentNode&, const CommentNode&) = default;
};

struct Node {
  std::variant<Element, TextNode, MathNode, CodeNode, SlideSlot, CommentNode> value;
  friend bool operator==(const Node&, const Node&) = default;
};

struct Slide {
  std::vector<Attribute> attributes;
  std::vector<Node> children;
  std::vector<Slide> vertical;
  friend bool operator==(const Slide&, const Slide&) = default;
};

struct CodeBlock {
  enum class Source { inline_text, file, snippet };

  Source source = Source::inline_text;
  /// `inline-<n>` (n counts inline blocks from 0), `file-<path>` or
  /// `snip-<name>`.
  std::string id;
  std::string language;  ///< From a language class or a file extension; may be empty.
  std::vector<std::string> classes;
  std::vector<Attribute> attributes;
  std::string src;          ///< File path, or snippet name without '#'.
  std::string inline_text;  ///< Dedented content of inline blocks.

  [[nodiscard]] bool has_class(std::string_view c) const;
  [[nodiscard]] bool hidden() const { return has_class("hidden"); }
  friend bool operator==(const CodeBlock&, const CodeBlock&) = default;
};

struct Deck {
  std::vector<Slide> slides;
  std::vector<CodeBlock> code_blocks;   ///< Document order.
  std::vector<std::size_t> hidden_code; ///< Indices of top-level code blocks.
  /// Top-level content in order: slide slots, hidden code and anything else.
  std::vector<Node> top;
  friend bool operator==(const Deck&, const Deck&) = default;
};

class StructureError : public std::runtime_error {
 public:
  StructureError(std::size_t line, std::size_t col, std::string message);
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t col() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

/// Reads a presentation. Top-level sections are slides and sections inside
/// them are vertical slides; deeper nesting is a StructureError. A code
/// element outside every section is hidden code. Throws ParseError for an
/// unclosed top-level section.
Deck parse_slides(std::string_view html);

/// Slide markup for a deck; parse_slides(render_slides(d)) == d.
std::string render_slides(const Deck& deck);

/// Strips blank lines at both ends and the common indentation.
std::string normalize_code(std::string_view text);

/// Normalized file path used in ids: lexically normal, no leading "./".
std::string normalize_src_path(std::string_view path);

struct SnippetOwner {
  std::string source_id;
  std::string language;
};
using SnippetIndex = std::map<std::string, SnippetOwner>;

/// A text the server must load: a file or the body of an inline block.
struct CodeSource {
  std::string id;  ///< Same as the id of the code block(s) it came from.
  CodeBlock::Source kind = CodeBlock::Source::inline_text;
  std::filesystem::path path;  ///< Files only, resolved against the base directory.
  std::string text;            ///< Inline blocks only.
  std::string language;        ///< May be empty.
};

/// A visible code block and what it shows.
struct CodeRef {
  std::size_t block = 0;
  std::string id;
  CodeBlock::Source kind = CodeBlock::Source::inline_text;
  std::string source_id;
  std::optional<std::string> snippet;
  std::string language;
};

class UnresolvedSnippet : public std::runtime_error {
 public:
  explicit UnresolvedSnippet(std::string name)
      : std::runtime_error("no snippet named '#" + name + "'"), name_(std::move(name)) {}
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class MissingFile : public std::runtime_error {
 public:
  explicit MissingFile(std::filesystem::path path)
      : std::runtime_error("code file not found: " + path.string()), path_(std::move(path)) {}
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Texts behind all code blocks, hidden ones included, without duplicates.
/// Throws MissingFile.
std::vector<CodeSource> collect_sources(const Deck& deck, const std::filesystem::path& base_dir);

/// Visible code blocks in document order. Throws UnresolvedSnippet.
std::vector<CodeRef> collect_code_refs(const Deck& deck, const SnippetIndex& snippets);

struct FragmentInfo {
  std::size_t index = 0;  ///< Fragment index in the source.
  std::size_t variants = 0;
  std::size_t live = 0;    ///< Variant written outside comments.
  std::size_t active = 0;  ///< Variant currently shown.
  bool selection = false;
};

/// Extra per-document data for the client.
struct BootDocument {
  std::string id;
  std::string language;
  std::vector<FragmentInfo> fragments;
};

/// The presentation page: slide markup plus the client boot configuration.
std::string render_boilerplate(const Deck& deck, const config::Settings& settings,
                               const std::vector<CodeRef>& refs = {},
                               const std::vector<BootDocument>& documents = {});

/// The boot configuration embedded by render_boilerplate, as JSON text.
std::string boot_config(const Deck& deck, const config::Settings& settings,
                        const std::vector<CodeRef>& refs, const std::vector<BootDocument>& documents);

}  // namespace cobra::slides
