#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "cobra/slides/deck.hpp"

namespace cobra::slides {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kFixture = std::string(COBRA_FIXTURES_DIR) + "/five-slides";

// Regex-driven reference for formula splitting.
std::vector<TextPiece> reference_split(const std::string& s) {
  static const std::regex escaped(R"(\\\$)");
  static const std::regex display(R"(\$\$((?:\\\$|[^$\\]|\\(?!\$)|\$(?!\$))+?)\$\$)");
  static const std::regex inline_math(R"(\$((?:\\\$|[^$\\]|\\(?!\$))+?)\$)");
  std::vector<TextPiece> out;
  std::string text;
  auto flush = [&] {
    if (!text.empty()) out.emplace_back(text);
    text.clear();
  };
  std::size_t i = 0;
  const auto flags = std::regex_constants::match_continuous;
  while (i < s.size()) {
    std::smatch m;
    const auto from = s.begin() + static_cast<std::ptrdiff_t>(i);
    if (std::regex_search(from, s.end(), m, escaped, flags)) {
      text += '$';
      i += 2;
    } else if (std::regex_search(from, s.end(), m, display, flags)) {
      flush();
      out.emplace_back(MathSpan{m[1].str(), true});
      i += m.length(0);
    } else if (std::regex_search(from, s.end(), m, inline_math, flags)) {
      flush();
      out.emplace_back(MathSpan{m[1].str(), false});
      i += m.length(0);
    } else {
      text += s[i++];
    }
  }
  flush();
  return out;
}

TEST(SplitMath, Examples) {
  const auto p = split_math(R"(cost $a \rightarrow b$ and $$x^2$$ for \$5)");
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(std::get<MathSpan>(p[1]), (MathSpan{R"(a \rightarrow b)", false}));
  EXPECT_EQ(std::get<MathSpan>(p[3]), (MathSpan{"x^2", true}));
  EXPECT_EQ(std::get<std::string>(p[4]), " for $5");
  EXPECT_EQ(split_math("a $ b").size(), 1u);
  EXPECT_EQ(std::get<MathSpan>(split_math(R"($a\$b$)")[0]).tex, R"(a\$b)");
}

TEST(SplitMath, AgreesWithReferenceOnAllShortStrings) {
  const std::string alphabet = "$\\a";
  std::vector<std::string> level{""};
  std::size_t checked = 0;
  for (int len = 0; len <= 8; ++len) {
    std::vector<std::string> next;
    for (const auto& s : level) {
      ASSERT_EQ(split_math(s), reference_split(s)) << s;
      ++checked;
      for (char c : alphabet) next.push_back(s + c);
    }
    level = std::move(next);
  }
  EXPECT_EQ(checked, 9841u);
}

TEST(Html, TokenizesAttributesAndRawCode) {
  const auto t = tokenize_html(R"(<code class='a b' src=x.thy data-x="&quot;q&quot;" hidden>if a < b </p> then</code>)");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].name, "code");
  ASSERT_EQ(t[0].attributes.size(), 4u);
  EXPECT_EQ(t[0].attributes[0].value, "a b");
  EXPECT_EQ(t[0].attributes[1].value, "x.thy");
  EXPECT_EQ(t[0].attributes[2].value, "\"q\"");
  EXPECT_FALSE(t[0].attributes[3].has_value);
  EXPECT_EQ(t[1].data, "if a < b </p> then");
  EXPECT_EQ(t[2].kind, HtmlToken::Kind::end_tag);
}

TEST(Html, MalformedAttributes) {
  EXPECT_THROW(tokenize_html(R"(<a href="x>text)"), ParseError);
  EXPECT_THROW(tokenize_html(R"(<a ="x">)"), ParseError);
  EXPECT_THROW(tokenize_html("<a href"), ParseError);
  try {
    tokenize_html("<p>\n  <a b=\"c>");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.col(), 6u);
  }
}

TEST(Html, StrayAngleBracketIsText) {
  const auto t = tokenize_html("a < b <3");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].data, "a < b <3");
}

TEST(Deck, FiveSlideFixture) {
  const Deck deck = parse_slides(read_file(kFixture + "/slides.html"));
  EXPECT_EQ(deck.slides.size(), 5u);
  ASSERT_EQ(deck.hidden_code.size(), 1u);
  const CodeBlock& hidden = deck.code_blocks[deck.hidden_code[0]];
  EXPECT_EQ(hidden.id, "file-src/Seq.thy");
  EXPECT_EQ(hidden.language, "isabelle");
  ASSERT_EQ(deck.code_blocks.size(), 6u);
  EXPECT_EQ(deck.code_blocks[1].id, "snip-def-seq-conc");
  EXPECT_EQ(deck.code_blocks[2].classes, (std::vector<std::string>{"states"}));
  EXPECT_EQ(deck.code_blocks[4].id, "inline-0");
  EXPECT_EQ(deck.code_blocks[4].language, "haskell");
  EXPECT_EQ(deck.code_blocks[4].inline_text,
            "module Example where\nfibs = {-(-}undefined{-|0 : 1 : zipWith (+) fibs (tail fibs))-}");
  EXPECT_EQ(deck.code_blocks[5].inline_text, "object Example {\n  val x = /*(???|*/3 * 7/*)*/\n}");
}

TEST(Deck, CodeRefsAndSources) {
  const Deck deck = parse_slides(read_file(kFixture + "/slides.html"));
  const auto sources = collect_sources(deck, kFixture);
  ASSERT_EQ(sources.size(), 3u);
  EXPECT_EQ(sources[0].id, "file-src/Seq.thy");
  SnippetIndex index;
  for (const char* s : {"def-seq-conc", "reverse-conc", "reverse-reverse"}) {
    index[s] = {"file-src/Seq.thy", "isabelle"};
  }
  const auto refs = collect_code_refs(deck, index);
  ASSERT_EQ(refs.size(), 5u);
  EXPECT_EQ(refs[0].snippet, "def-seq-conc");
  EXPECT_EQ(refs[0].language, "isabelle");
  EXPECT_EQ(refs[3].kind, CodeBlock::Source::inline_text);
  index.erase("reverse-conc");
  EXPECT_THROW(collect_code_refs(deck, index), UnresolvedSnippet);
  EXPECT_THROW(collect_sources(parse_slides(R"(<code src="nope.scala"></code>)"), kFixture), MissingFile);
}

TEST(Deck, VerticalSlides) {
  const Deck deck = parse_slides("<section><section>a</section><section>b</section></section><section>c</section>");
  ASSERT_EQ(deck.slides.size(), 2u);
  EXPECT_EQ(deck.slides[0].vertical.size(), 2u);
  EXPECT_THROW(parse_slides("<section><section><section></section></section></section>"), StructureError);
  EXPECT_THROW(parse_slides("<section><h2>x</h2>"), ParseError);
}

TEST(Deck, MathInSlides) {
  const Deck deck = parse_slides(R"(<section><p>Let $a \rightarrow b$ cost \$3</p></section>)");
  const auto& p = std::get<Element>(deck.slides[0].children[0].value);
  ASSERT_EQ(p.children.size(), 3u);
  EXPECT_EQ(std::get<MathNode>(p.children[1].value).math.tex, R"(a \rightarrow b)");
  EXPECT_EQ(std::get<TextNode>(p.children[2].value).text, " cost $3");
}

std::string random_html(std::mt19937_64& rng, int depth = 0) {
  std::uniform_int_distribution<int> pick(0, 9);
  const std::vector<std::string> texts{"x", " $a$ ", "$$b$$", "\\$", "$", "&amp; y", "\n  ", "p\\"};
  std::string out;
  for (int n = pick(rng) % 4; n >= 0; --n) {
    switch (pick(rng)) {
      case 0: out += "<ul class=\"c\"><li>" + texts[pick(rng) % texts.size()] + "</li></ul>"; break;
      case 1: out += "<code class=\"scala\">\n  val a = b < c &amp;&amp; \"$\"\n</code>"; break;
      case 2: out += "<code src=\"#s" + std::to_string(pick(rng)) + "\"></code>"; break;
      case 3: out += "<img src='i.png' alt=\"it's\">"; break;
      case 4: out += "<!-- note -->"; break;
      case 5:
        if (depth == 1) out += "<section data-x>" + random_html(rng, 2) + "</section>";
        break;
      case 6: out += "<p>" + texts[pick(rng) % texts.size()] + "<b>" + texts[pick(rng) % texts.size()] + "</p>"; break;
      default: out += texts[pick(rng) % texts.size()];
    }
  }
  return out;
}

TEST(Deck, RenderThenParseRoundTrips) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 2000; ++i) {
    std::string html;
    if (i % 3 == 0) html += "<code class=\"hidden\" src=\"#h\"></code>\n";
    for (int s = 0; s < 3; ++s) html += "<section>" + random_html(rng, 1) + "</section>\n";
    const Deck deck = parse_slides(html);
    const std::string rendered = render_slides(deck);
    ASSERT_EQ(parse_slides(rendered), deck) << html << "\n---\n" << rendered;
  }
}

TEST(Deck, BoilerplateTitleAndBoot) {
  config::Settings settings = config::resolve({}, config::reference_config());
  settings.title = "A <b> & c";
  const Deck deck = parse_slides("<section><code class=\"scala\">val x = 1</code></section>");
  const auto refs = collect_code_refs(deck, {});
  const std::string page = render_boilerplate(deck, settings, refs, {{"inline-0", "scala", {{0, 2, 0, false}}}});
  EXPECT_NE(page.find("<title>A &lt;b&gt; &amp; c</title>"), std::string::npos);
  EXPECT_NE(page.find("\"doc\":\"inline-0\""), std::string::npos);
  EXPECT_NE(page.find("\"transition\":\"slide\""), std::string::npos);
  EXPECT_NE(page.find("\"variants\":2"), std::string::npos);
}

}  // namespace
}  // namespace cobra::slides
