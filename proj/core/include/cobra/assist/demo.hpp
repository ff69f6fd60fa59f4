#pragma once

#include <vector>

#include "cobra/snippets/language.hpp"
#include "cobra/sync/annotation.hpp"
#include "cobra/text.hpp"

namespace cobra::assist {

/// Keywords highlighted by the demo analysis.
inline constexpr std::string_view kDemoKeywords[] = {"lemma", "fun", "datatype", "val",  "module",
                                                     "where", "by",  "apply",    "done", "oops"};

/// Built-in analysis used when no real assistant is available, and as the
/// reference behaviour of external assistants in tests. Produces, sorted:
/// - token "keyword" for keywords, "number" for digit runs outside
///   identifiers, "string" and "comment" for literals and comments;
/// - info "hole" for a run of exactly three '?' or the word `undefined`;
/// - error "bracket" for every bracket without a partner (one character);
/// - warning "todo" for each word TODO inside a comment.
/// Pure: equal inputs give equal outputs.
std::vector<sync::Annotation> demo_analyze(TextView text, const snippets::LanguageSyntax& syntax);

}  // namespace cobra::assist
