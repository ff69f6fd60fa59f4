#include "cobra/snippets/projection.hpp"

#include <algorithm>
#include <variant>

namespace cobra::snippets {

namespace {

using sync::Operation;

bool overlaps(Range a, Range b) { return a.begin < b.end && b.begin < a.end; }

bool contains_token(TextView text, TextView token) {
  return !token.empty() && text.find(token) != TextView::npos;
}

// One primitive edit of an operation: where it happens in the old text and
// where its inserted text lands in the new text.
struct RawEdit {
  std::size_t pos = 0;
  std::size_t new_pos = 0;
  std::size_t deleted = 0;
  TextView inserted;
};

std::vector<RawEdit> edits_of(const Operation& op) {
  std::vector<RawEdit> edits;
  std::size_t pos = 0;
  std::size_t new_pos = 0;
  for (const auto& c : op.components()) {
    if (const auto* r = std::get_if<sync::Retain>(&c)) {
      pos += r->count;
      new_pos += r->count;
    } else if (const auto* i = std::get_if<sync::Insert>(&c)) {
      edits.push_back(RawEdit{pos, new_pos, 0, i->text});
      new_pos += i->text.size();
    } else if (const auto* d = std::get_if<sync::Delete>(&c)) {
      edits.push_back(RawEdit{pos, new_pos, d->count, {}});
      pos += d->count;
    }
  }
  return edits;
}

// Span whose interior an edit may not touch without relexing. Line comments
// and unterminated spans also own the position right after them.
struct Lexeme {
  Range range;
  bool open_ended = false;
};

bool edit_inside(const RawEdit& e, const Lexeme& l) {
  const Range r = l.range;
  if (e.deleted > 0) {
    const Range del{e.pos, e.pos + e.deleted};
    return overlaps(del, {r.begin, r.end + (l.open_ended ? 1 : 0)});
  }
  return e.pos > r.begin && (e.pos < r.end || (l.open_ended && e.pos == r.end));
}

bool window_has_token(TextView text, std::size_t begin, std::size_t end, std::size_t reach,
                      const std::vector<TextView>& tokens) {
  const std::size_t lo = begin > reach ? begin - reach : 0;
  const std::size_t hi = std::min(text.size(), end + reach);
  if (lo >= hi) return false;
  const TextView window = text.substr(lo, hi - lo);
  return std::any_of(tokens.begin(), tokens.end(),
                     [&](TextView t) { return contains_token(window, t); });
}

bool touches_structure(const Structure& s, const LanguageSyntax& syntax, TextView old_text,
                       TextView new_text, const std::vector<RawEdit>& edits) {
  std::vector<Lexeme> lexemes;
  for (const auto& c : s.comments) {
    lexemes.push_back({c.range, c.line || c.range.end == old_text.size()});
  }
  for (const auto& r : s.strings) {
    lexemes.push_back({r, r.size() < 2 || old_text[r.end - 1] != U'"'});
  }
  std::vector<TextView> tokens{syntax.block_open, syntax.block_close, U"\""};
  if (syntax.line_comment) tokens.emplace_back(*syntax.line_comment);
  std::size_t reach = 0;
  for (TextView t : tokens) reach = std::max(reach, t.size() - 1);

  for (const auto& e : edits) {
    for (const auto& l : lexemes) {
      if (edit_inside(e, l)) return true;
    }
    if (e.deleted > 0) {
      const Range del{e.pos, e.pos + e.deleted};
      for (const auto& m : s.markers) {
        Range guard = m.line;
        if (guard.begin > 0 && old_text[guard.begin - 1] == U'\n') --guard.begin;
        if (overlaps(del, guard)) return true;
      }
      if (window_has_token(old_text, e.pos, e.pos + e.deleted, reach, tokens)) return true;
    } else {
      for (const auto& m : s.markers) {
        if (e.pos >= m.line.begin && e.pos < m.line.end) return true;
      }
    }
    if (window_has_token(new_text, e.new_pos, e.new_pos + e.inserted.size(), reach, tokens)) {
      return true;
    }
    for (const auto& f : s.fragments) {
      if (e.pos <= f.whole.begin || e.pos >= f.whole.end) continue;
      const bool in_variant =
          std::any_of(f.variants.begin(), f.variants.end(), [&](const FragmentVariant& v) {
            return e.pos >= v.range.begin && e.pos <= v.range.end;
          });
      if (!in_variant) return true;
    }
  }
  return false;
}

// Half-open range that keeps insertions at its edges outside.
Range move_exclusive(Range r, const Operation& op) {
  return {sync::transform_position(r.begin, op, true), sync::transform_position(r.end, op, false)};
}

// Range that absorbs insertions at its edges.
Range move_inclusive(Range r, const Operation& op) {
  const std::size_t begin = sync::transform_position(r.begin, op, false);
  const std::size_t end = sync::transform_position(r.end, op, true);
  return {begin, std::max(begin, end)};
}

Projection project_region(TextView text, const Structure& structure, Range region,
                          const FragmentState& state, bool strip_markers) {
  Projection proj;
  proj.region = region;
  proj.raw_length = text.size();

  std::vector<Range> hidden;
  std::vector<Range> hidden_markers;
  if (strip_markers) {
    for (const auto& m : structure.markers) {
      if (!overlaps(m.line, region)) continue;
      const Range clipped{std::max(m.line.begin, region.begin), std::min(m.line.end, region.end)};
      hidden.push_back(clipped);
      hidden_markers.push_back(clipped);
    }
  }

  struct VariantPiece {
    Range range;
    bool in_comment;
  };
  std::vector<VariantPiece> variants;
  for (std::size_t idx = 0; idx < structure.fragments.size(); ++idx) {
    const Fragment& f = structure.fragments[idx];
    if (f.whole.begin < region.begin || f.whole.end > region.end) continue;
    const bool crosses_marker = std::any_of(hidden_markers.begin(), hidden_markers.end(),
                                            [&](Range m) { return overlaps(m, f.whole); });
    if (crosses_marker) continue;
    const auto it = state.find(idx);
    const std::size_t active = it == state.end() ? f.live_index() : it->second;
    if (active >= f.variants.size()) {
      throw std::out_of_range("fragment " + std::to_string(idx) + " has no variant " +
                              std::to_string(active));
    }
    proj.fragment_state[idx] = active;
    const FragmentVariant& v = f.variants[active];
    hidden.push_back({f.whole.begin, v.range.begin});
    hidden.push_back({v.range.end, f.whole.end});
    variants.push_back({v.range, !v.live});
  }

  std::sort(hidden.begin(), hidden.end(),
            [](Range a, Range b) { return a.begin < b.begin || (a.begin == b.begin && a.end < b.end); });

  const auto variant_at = [&](Range gap) -> const VariantPiece* {
    for (const auto& v : variants) {
      if (v.range == gap) return &v;
    }
    return nullptr;
  };

  std::size_t view_at = 0;
  const auto emit = [&](Range gap) {
    const VariantPiece* v = variant_at(gap);
    if (gap.empty() && v == nullptr) return;
    proj.pieces.push_back(Piece{gap, view_at, v != nullptr, v != nullptr && v->in_comment});
    proj.view_text.append(text.substr(gap.begin, gap.size()));
    view_at += gap.size();
  };

  std::size_t cursor = region.begin;
  for (const Range& h : hidden) {
    if (h.empty()) {
      // Zero-width scaffolding still separates a variant from its neighbours.
      if (h.begin >= cursor) {
        emit({cursor, h.begin});
        cursor = h.begin;
      }
      continue;
    }
    if (h.begin >= cursor) emit({cursor, h.begin});
    cursor = std::max(cursor, h.end);
    proj.hidden_ranges.push_back(h);
  }
  if (region.end >= cursor) emit({cursor, region.end});

  for (const Range& m : hidden_markers) {
    if (m.begin > region.begin && text[m.begin - 1] == U'\n' && proj.to_view(m.begin - 1)) {
      proj.guarded_breaks.push_back(m.begin - 1);
    }
  }
  return proj;
}

// Moving-index visibility lookup for monotonically increasing positions.
class VisibilityWalker {
 public:
  explicit VisibilityWalker(const Projection& proj) : proj_(proj) {}

  // View offset of `pos` if visible.
  std::optional<std::size_t> at(std::size_t pos) {
    const auto& pieces = proj_.pieces;
    while (index_ < pieces.size() && pieces[index_].raw.end <= pos) ++index_;
    if (index_ < pieces.size() && pieces[index_].raw.begin <= pos) {
      return pieces[index_].view_begin + (pos - pieces[index_].raw.begin);
    }
    return std::nullopt;
  }

 private:
  const Projection& proj_;
  std::size_t index_ = 0;
};

}  // namespace

const SnippetDef* Structure::find_snippet(std::string_view name) const {
  for (const auto& s : snippets) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

Structure scan_structure(TextView text, const LanguageSyntax& syntax) {
  const LexResult lexed = lex(text, syntax);
  MarkerScan markers = scan_markers(text, lexed);
  Structure s;
  s.fragments = parse_fragments(text, lexed);
  for (const auto& f : s.fragments) {
    for (const auto& m : markers.markers) {
      if (overlaps(f.whole, m.line)) {
        throw MalformedFragment(f.whole.begin, "fragment spans a snippet marker");
      }
    }
  }
  s.markers = std::move(markers.markers);
  s.snippets = std::move(markers.snippets);
  s.comments = lexed.comments;
  s.strings = lexed.strings;
  return s;
}

std::optional<Structure> transform_structure(const Structure& structure,
                                             const LanguageSyntax& syntax, TextView old_text,
                                             const Operation& op, TextView new_text) {
  if (touches_structure(structure, syntax, old_text, new_text, edits_of(op))) return std::nullopt;
  Structure out = structure;
  for (auto& c : out.comments) {
    c.range = move_exclusive(c.range, op);
    c.body = move_exclusive(c.body, op);
  }
  for (auto& r : out.strings) r = move_exclusive(r, op);
  for (auto& m : out.markers) m.line = move_exclusive(m.line, op);
  for (auto& s : out.snippets) {
    const Range r = move_inclusive(s.range(), op);
    s.begin_offset = r.begin;
    s.end_offset = r.end;
  }
  for (auto& f : out.fragments) {
    f.whole = move_exclusive(f.whole, op);
    for (auto& v : f.variants) {
      v.range = move_inclusive(v.range, op);
      v.text = Text(new_text.substr(v.range.begin, v.range.size()));
    }
  }
  return out;
}

std::optional<std::size_t> Projection::to_raw(std::size_t view_offset) const {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), view_offset,
                             [](std::size_t v, const Piece& p) { return v < p.view_begin; });
  while (it != pieces.begin()) {
    --it;
    if (view_offset < it->view_begin + it->raw.size()) {
      return it->raw.begin + (view_offset - it->view_begin);
    }
    if (!it->raw.empty()) break;
  }
  return std::nullopt;
}

std::optional<std::size_t> Projection::to_view(std::size_t raw_offset) const {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), raw_offset,
                             [](std::size_t r, const Piece& p) { return r < p.raw.begin; });
  while (it != pieces.begin()) {
    --it;
    if (it->raw.contains(raw_offset)) return it->view_begin + (raw_offset - it->raw.begin);
    if (!it->raw.empty()) break;
  }
  return std::nullopt;
}

std::size_t Projection::insertion_point(std::size_t view_offset) const {
  const Piece* starting = nullptr;
  const Piece* ending = nullptr;
  for (const Piece& p : pieces) {
    const std::size_t view_end = p.view_begin + p.raw.size();
    if (p.view_begin > view_offset) break;
    if (view_offset > view_end) continue;
    if (view_offset > p.view_begin && view_offset < view_end) {
      return p.raw.begin + (view_offset - p.view_begin);
    }
    if (p.variant) return p.raw.begin + (view_offset - p.view_begin);
    if (p.view_begin == view_offset && starting == nullptr) starting = &p;
    if (view_end == view_offset) ending = &p;
  }
  if (starting) return starting->raw.begin;
  if (ending) return ending->raw.end;
  return region.end;
}

std::optional<Range> Projection::to_view_range(Range raw) const {
  if (raw.empty()) {
    for (const Piece& p : pieces) {
      if (raw.begin >= p.raw.begin && raw.begin <= p.raw.end) {
        const std::size_t v = p.view_begin + (raw.begin - p.raw.begin);
        return Range{v, v};
      }
    }
    return std::nullopt;
  }
  std::optional<std::size_t> begin;
  std::size_t end = 0;
  for (const Piece& p : pieces) {
    if (!overlaps(p.raw, raw)) continue;
    const std::size_t lo = std::max(p.raw.begin, raw.begin);
    const std::size_t hi = std::min(p.raw.end, raw.end);
    if (!begin) begin = p.view_begin + (lo - p.raw.begin);
    end = p.view_begin + (hi - p.raw.begin);
  }
  if (!begin) return std::nullopt;
  return Range{*begin, end};
}

Projection project(TextView text, const Structure& structure,
                   const std::optional<std::string>& snippet, const FragmentState& state,
                   bool strip_markers) {
  Range region{0, text.size()};
  if (snippet) {
    const SnippetDef* def = structure.find_snippet(*snippet);
    if (def == nullptr) throw std::out_of_range("unknown snippet '#" + *snippet + "'");
    region = def->range();
  }
  return project_region(text, structure, region, state, strip_markers);
}

Projection project(TextView text, const LanguageSyntax& syntax,
                   const std::optional<SnippetDef>& snippet, const FragmentState& state,
                   bool strip_markers) {
  const Structure structure = scan_structure(text, syntax);
  const Range region = snippet ? snippet->range() : Range{0, text.size()};
  return project_region(text, structure, region, state, strip_markers);
}

Operation map_view_edit(const Projection& projection, const Operation& view_op,
                        const LanguageSyntax* syntax) {
  if (view_op.base_length() != projection.view_text.size()) {
    throw sync::LengthMismatch("view edit base length " + std::to_string(view_op.base_length()) +
                               " does not match view length " +
                               std::to_string(projection.view_text.size()));
  }
  Operation raw;
  std::size_t at = 0;  // raw position consumed so far
  std::size_t v = 0;   // view position
  const auto advance_to = [&](std::size_t pos) {
    if (pos < at) throw std::logic_error("view edit maps to non-monotone raw positions");
    raw.retain(pos - at);
    at = pos;
  };

  for (const auto& c : view_op.components()) {
    if (const auto* r = std::get_if<sync::Retain>(&c)) {
      v += r->count;
    } else if (const auto* i = std::get_if<sync::Insert>(&c)) {
      const std::size_t pos = projection.insertion_point(v);
      if (syntax != nullptr) {
        for (const Piece& p : projection.pieces) {
          if (p.in_comment && pos >= p.raw.begin && pos <= p.raw.end &&
              (contains_token(i->text, syntax->block_close) ||
               contains_token(i->text, syntax->block_open))) {
            throw EditRejected("comment delimiters cannot be typed into a commented variant");
          }
        }
      }
      advance_to(pos);
      raw.insert(i->text);
    } else if (const auto* d = std::get_if<sync::Delete>(&c)) {
      const std::size_t view_end = v + d->count;
      for (const Piece& p : projection.pieces) {
        const std::size_t p_end = p.view_begin + p.raw.size();
        if (p_end <= v || p.view_begin >= view_end) continue;
        const std::size_t lo = p.raw.begin + (std::max(v, p.view_begin) - p.view_begin);
        const std::size_t hi = p.raw.begin + (std::min(view_end, p_end) - p.view_begin);
        for (std::size_t guarded : projection.guarded_breaks) {
          if (guarded >= lo && guarded < hi) {
            throw EditRejected("deleting this line break would merge code into a snippet marker");
          }
        }
        advance_to(lo);
        raw.erase(hi - lo);
        at = hi;
      }
      v = view_end;
    }
  }
  advance_to(projection.raw_length);
  return raw;
}

Operation map_raw_edit(const Projection& before, const Operation& raw_op, const Projection& after) {
  Operation out;
  VisibilityWalker old_vis(before);
  VisibilityWalker new_vis(after);
  std::size_t old_pos = 0;
  std::size_t new_pos = 0;
  for (const auto& c : raw_op.components()) {
    if (const auto* r = std::get_if<sync::Retain>(&c)) {
      for (std::size_t k = 0; k < r->count; ++k, ++old_pos, ++new_pos) {
        const auto was = old_vis.at(old_pos);
        const auto now = new_vis.at(new_pos);
        if (was && now) {
          out.retain(1);
        } else if (was) {
          out.erase(1);
        } else if (now) {
          out.insert(Text(1, after.view_text[*now]));
        }
      }
    } else if (const auto* i = std::get_if<sync::Insert>(&c)) {
      for (std::size_t k = 0; k < i->text.size(); ++k, ++new_pos) {
        if (new_vis.at(new_pos)) out.insert(Text(1, i->text[k]));
      }
    } else if (const auto* d = std::get_if<sync::Delete>(&c)) {
      for (std::size_t k = 0; k < d->count; ++k, ++old_pos) {
        if (old_vis.at(old_pos)) out.erase(1);
      }
    }
  }
  if (out.base_length() != before.view_text.size() ||
      out.target_length() != after.view_text.size()) {
    throw std::logic_error("raw edit does not connect the two projections");
  }
  return out;
}

}  // namespace cobra::snippets
