#include "cobra/server/documents.hpp"

#include <algorithm>

#include "cobra/snippets/language.hpp"

namespace cobra::server {

using snippets::EditRejected;
using sync::Operation;

namespace {

snippets::Structure scan(const Source& src, TextView text) {
  if (src.syntax == nullptr) return {};
  return snippets::scan_structure(text, *src.syntax);
}

// Keeps stepped fragments whose index and variant still exist.
snippets::FragmentState reconcile(const snippets::FragmentState& state,
                                  const snippets::Structure& structure) {
  snippets::FragmentState out;
  for (const auto& [index, variant] : state) {
    if (index < structure.fragments.size() && variant < structure.fragments[index].variants.size()) {
      out[index] = variant;
    }
  }
  return out;
}

}  // namespace

void DocumentStore::add_source(const std::string& id, Text text, const std::string& language) {
  auto src = std::make_unique<Source>(Source{id, language, nullptr, sync::RevisionLog(id, text), {}, {}, {}});
  if (!language.empty()) {
    src->syntax = snippets::find_language(language);
    if (src->syntax == nullptr) throw std::invalid_argument("unknown language '" + language + "'");
  }
  src->structure = scan(*src, text);
  sources_[id] = std::move(src);
}

void DocumentStore::add_view(const ViewSpec& spec) {
  const Source& src = source(spec.source_id);
  if (spec.snippet && src.structure.find_snippet(*spec.snippet) == nullptr) {
    throw DocNotFound("#" + *spec.snippet);
  }
  auto proj = project_view(src, spec);
  auto view = std::make_unique<View>(View{spec, sync::RevisionLog(spec.id, proj.view_text), std::move(proj)});
  views_[spec.id] = std::move(view);
}

const View& DocumentStore::view(const std::string& id) const {
  auto it = views_.find(id);
  if (it == views_.end()) throw DocNotFound(id);
  return *it->second;
}

const Source& DocumentStore::source(const std::string& id) const {
  auto it = sources_.find(id);
  if (it == sources_.end()) throw DocNotFound(id);
  return *it->second;
}

Source& DocumentStore::source_mut(const std::string& id) {
  auto it = sources_.find(id);
  if (it == sources_.end()) throw DocNotFound(id);
  return *it->second;
}

std::vector<std::string> DocumentStore::view_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, v] : views_) out.push_back(id);
  return out;
}

std::vector<std::string> DocumentStore::source_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, s] : sources_) out.push_back(id);
  return out;
}

std::vector<std::string> DocumentStore::views_of(const std::string& source_id) const {
  std::vector<std::string> out;
  for (const auto& [id, v] : views_) {
    if (v->spec.source_id == source_id) out.push_back(id);
  }
  return out;
}

snippets::Projection DocumentStore::project_view(const Source& src, const ViewSpec& spec) const {
  return snippets::project(src.log.text(), src.structure, spec.snippet, src.fragment_state,
                           spec.strip_markers);
}

EditOutcome DocumentStore::edit(const std::string& view_id, sync::ClientId author,
                                std::uint64_t parent_seq, const Operation& op) {
  auto vit = views_.find(view_id);
  if (vit == views_.end()) throw DocNotFound(view_id);
  View& origin = *vit->second;
  Source& src = source_mut(origin.spec.source_id);

  const Operation view_op = origin.log.rebase(parent_seq, op);
  const Operation raw_op = snippets::map_view_edit(origin.projection, view_op, src.syntax);
  const Text& old_text = src.log.text();
  const Text new_text = sync::apply(old_text, raw_op);

  snippets::Structure structure;
  if (src.syntax != nullptr) {
    auto moved = snippets::transform_structure(src.structure, *src.syntax, old_text, raw_op, new_text);
    if (moved) {
      structure = std::move(*moved);
    } else {
      try {
        structure = snippets::scan_structure(new_text, *src.syntax);
      } catch (const std::exception& e) {
        throw EditRejected(e.what());
      }
    }
  }
  const snippets::FragmentState state = reconcile(src.fragment_state, structure);

  // Project every view of the source before changing anything.
  std::map<std::string, snippets::Projection> projected;
  for (const auto& id : views_of(src.id)) {
    const ViewSpec& spec = views_.at(id)->spec;
    if (spec.snippet && structure.find_snippet(*spec.snippet) == nullptr) {
      throw EditRejected("the edit would remove snippet #" + *spec.snippet);
    }
    projected.emplace(id, snippets::project(new_text, structure, spec.snippet, state, spec.strip_markers));
  }
  if (projected.at(view_id).view_text != sync::apply(origin.projection.view_text, view_op)) {
    throw EditRejected("the edit cannot be shown faithfully in this view");
  }

  EditOutcome out;
  out.view_op = view_op;
  out.raw_op = raw_op;
  for (auto& [id, proj] : projected) {
    View& v = *views_.at(id);
    if (id == view_id) continue;
    Operation change = snippets::map_raw_edit(v.projection, raw_op, proj);
    if (!change.is_noop()) {
      const std::uint64_t seq = v.log.commit(sync::kServerAuthor, change);
      out.others.push_back(ViewUpdate{id, seq, std::move(change)});
    }
  }
  for (auto& [id, proj] : projected) views_.at(id)->projection = std::move(proj);

  src.annotations = sync::transform_annotations(src.annotations, raw_op);
  src.log.commit(author, raw_op);
  src.structure = std::move(structure);
  src.fragment_state = state;
  out.seq = origin.log.commit(author, view_op);
  return out;
}

std::vector<ViewUpdate> DocumentStore::step_fragment(const std::string& source_id,
                                                     std::size_t fragment, std::size_t variant) {
  Source& src = source_mut(source_id);
  if (fragment >= src.structure.fragments.size()) {
    throw std::out_of_range("no fragment " + std::to_string(fragment) + " in " + source_id);
  }
  if (variant >= src.structure.fragments[fragment].variants.size()) {
    throw std::out_of_range("fragment " + std::to_string(fragment) + " has no variant " +
                            std::to_string(variant));
  }
  src.fragment_state[fragment] = variant;
  const Operation same = Operation::identity(src.log.text().size());
  std::vector<ViewUpdate> out;
  for (const auto& id : views_of(source_id)) {
    View& v = *views_.at(id);
    auto proj = project_view(src, v.spec);
    Operation change = snippets::map_raw_edit(v.projection, same, proj);
    v.projection = std::move(proj);
    if (change.is_noop()) continue;
    const std::uint64_t seq = v.log.commit(sync::kServerAuthor, change);
    out.push_back(ViewUpdate{id, seq, std::move(change)});
  }
  return out;
}

void DocumentStore::set_annotations(const std::string& source_id, std::uint64_t seq,
                                    std::vector<sync::Annotation> annotations) {
  Source& src = source_mut(source_id);
  const auto& revs = src.log.revisions();
  for (std::uint64_t k = seq; k < revs.size(); ++k) {
    annotations = sync::transform_annotations(annotations, revs[k].op);
  }
  std::sort(annotations.begin(), annotations.end());
  src.annotations = std::move(annotations);
}

std::vector<sync::Annotation> DocumentStore::view_annotations(const std::string& view_id) const {
  const View& v = view(view_id);
  const Source& src = source(v.spec.source_id);
  std::vector<sync::Annotation> out;
  for (const auto& a : src.annotations) {
    if (a.range.end < v.projection.region.begin || a.range.begin > v.projection.region.end) continue;
    const Range clipped{std::max(a.range.begin, v.projection.region.begin),
                        std::min(a.range.end, v.projection.region.end)};
    if (clipped.empty() && !a.range.empty()) continue;
    auto r = v.projection.to_view_range(clipped);
    if (!r) continue;
    sync::Annotation moved = a;
    moved.range = *r;
    out.push_back(std::move(moved));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cobra::server
