#include "cobra/server/presentation.hpp"

#include <fstream>
#include <sstream>

namespace cobra::server {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw slides::MissingFile(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Presentation load_presentation(const fs::path& dir, const config::Settings& settings) {
  const fs::path slides_path = dir / "slides.html";
  if (!fs::is_regular_file(slides_path)) throw MissingSlides(dir);
  Presentation p;
  p.dir = dir;
  p.deck = slides::parse_slides(read_file(slides_path));

  slides::SnippetIndex index;
  for (const auto& src : slides::collect_sources(p.deck, dir)) {
    std::string utf8 = src.kind == slides::CodeBlock::Source::file ? read_file(src.path) : src.text;
    Text text;
    try {
      text = from_utf8(utf8);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(src.id + ": not valid UTF-8");
    }
    const std::string language = src.language.empty() ? settings.language : src.language;
    p.store.add_source(src.id, std::move(text), language);
    for (const auto& s : p.store.source(src.id).structure.snippets) {
      const auto [it, fresh] = index.try_emplace(s.name, slides::SnippetOwner{src.id, language});
      if (!fresh) {
        throw snippets::SnippetError(snippets::SnippetError::Kind::duplicate_name, s.name);
      }
    }
  }
  p.refs = slides::collect_code_refs(p.deck, index);
  for (auto& ref : p.refs) {
    if (ref.language.empty()) ref.language = p.store.source(ref.source_id).language;
    if (p.store.has_view(ref.id)) continue;
    p.store.add_view({ref.id, ref.source_id, ref.snippet, true});
  }
  return p;
}

std::vector<slides::BootDocument> boot_documents(const Presentation& p) { return boot_documents(p.store); }

std::vector<slides::BootDocument> boot_documents(const DocumentStore& store) {
  std::vector<slides::BootDocument> out;
  for (const auto& id : store.view_ids()) {
    const View& v = store.view(id);
    const Source& src = store.source(v.spec.source_id);
    slides::BootDocument doc{id, src.language, {}};
    const Range region = v.projection.region;
    const auto& fragments = src.structure.fragments;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
      const auto& f = fragments[i];
      if (f.whole.begin < region.begin || f.whole.end > region.end) continue;
      const auto active = src.fragment_state.find(i);
      doc.fragments.push_back({i, f.variants.size(), f.live_index(),
                               active == src.fragment_state.end() ? f.live_index() : active->second,
                               f.kind() == snippets::Fragment::Kind::selection});
    }
    out.push_back(std::move(doc));
  }
  return out;
}

std::string render_page(const Presentation& p, const config::Settings& settings) {
  return slides::render_boilerplate(p.deck, settings, p.refs, boot_documents(p));
}

}  // namespace cobra::server
