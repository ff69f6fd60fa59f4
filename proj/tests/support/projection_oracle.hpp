#pragma once

// Line-based reference for snippet views of C-style documents whose only
// comments are `// begin #x` / `// end #x` markers and first-variant-live
// fragments `/*(*/live/*|dead)*/`.

#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace cobra::testing {

inline std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto nl = s.find('\n', start);
    if (nl == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
}

inline bool is_marker_line(const std::string& line) {
  static const std::regex re(R"(//\s*(begin|end) #[A-Za-z0-9_.:-]+\s*$)");
  return std::regex_search(line, re);
}

inline std::string strip_fragment_scaffolding(const std::string& s) {
  static const std::regex opener(R"(/\*\(\*/)");
  static const std::regex closer(R"(/\*\|[^*|)]*\)\*/)");
  return std::regex_replace(std::regex_replace(s, opener, ""), closer, "");
}

/// View of snippet `name`, or of the whole text when `name` is empty
/// (markers kept).
inline std::optional<std::string> oracle_view(const std::string& raw, const std::string& name) {
  if (name.empty()) return strip_fragment_scaffolding(raw);
  const auto lines = split_lines(raw);
  const std::regex begin_re("//\\s*begin #" + name + "\\s*$");
  const std::regex end_re("//\\s*end #" + name + "\\s*$");
  std::optional<std::size_t> b, e;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!b && std::regex_search(lines[i], begin_re)) b = i;
    else if (b && !e && std::regex_search(lines[i], end_re)) e = i;
  }
  if (!b || !e) return std::nullopt;
  std::string out;
  for (std::size_t i = *b + 1; i < *e; ++i) {
    if (is_marker_line(lines[i])) continue;
    out += lines[i];
    if (i + 1 < *e) out += '\n';
  }
  return strip_fragment_scaffolding(out);
}

/// A document with three overlapping snippets a, b, c and a few fragments.
inline std::string random_marked_document(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> body_lines(0, 3);
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<std::size_t> len(0, 6);
  const std::string alphabet = "ab =;";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  auto word = [&] {
    std::string w;
    for (std::size_t n = len(rng); n > 0; --n) w += alphabet[pick(rng)];
    return w;
  };
  auto body = [&] {
    std::string out;
    for (int n = body_lines(rng); n > 0; --n) {
      std::string line = word();
      if (coin(rng) == 0) line += "/*(*/" + word() + "/*|" + word() + ")*/" + word();
      out += line + "\n";
    }
    return out;
  };
  std::string doc = body();
  doc += "// begin #a\n" + body();
  doc += "  // begin #b\n" + body();
  doc += "// end #a\n" + body();
  doc += "// begin #c\n" + body();
  doc += "// end #b\n" + body();
  doc += "// end #c\n" + body();
  return doc;
}

}  // namespace cobra::testing
