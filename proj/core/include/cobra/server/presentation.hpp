#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobra/config/settings.hpp"
#include "cobra/server/documents.hpp"
#include "cobra/slides/deck.hpp"

namespace cobra::server {

class MissingSlides : public std::runtime_error {
 public:
  explicit MissingSlides(const std::filesystem::path& dir)
      : std::runtime_error("no slides.html in " + dir.string()) {}
};

/// A deck with its code loaded into a document store.
struct Presentation {
  std::filesystem::path dir;
  slides::Deck deck;
  std::vector<slides::CodeRef> refs;
  DocumentStore store;
};

/// Reads `dir/slides.html` and every code file it names (once; the store
/// owns the texts afterwards), registers one view per visible code block.
/// Sources without a language of their own use settings.language. Throws
/// MissingSlides, slides::ParseError, slides::MissingFile,
/// slides::UnresolvedSnippet and the snippet scanning errors.
Presentation load_presentation(const std::filesystem::path& dir, const config::Settings& settings);

/// Fragments visible in each view, for the boot configuration.
std::vector<slides::BootDocument> boot_documents(const DocumentStore& store);
std::vector<slides::BootDocument> boot_documents(const Presentation& p);

/// The page served at `/`.
std::string render_page(const Presentation& p, const config::Settings& settings);

}  // namespace cobra::server
