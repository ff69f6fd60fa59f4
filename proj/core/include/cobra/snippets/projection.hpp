#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cobra/snippets/fragments.hpp"
#include "cobra/snippets/language.hpp"
#include "cobra/snippets/markers.hpp"
#include "cobra/sync/operation.hpp"
#include "cobra/text.hpp"

namespace cobra::snippets {

/// Fragment index -> active variant index. Fragments missing from the map
/// show their live variant.
using FragmentState = std::map<std::size_t, std::size_t>;

/// Marker lines, snippets and fragments of one raw document, plus the
/// comment and string spans they were found in.
struct Structure {
  std::vector<MarkerLine> markers;
  std::vector<SnippetDef> snippets;
  std::vector<Fragment> fragments;
  std::vector<Comment> comments;
  std::vector<Range> strings;

  [[nodiscard]] const SnippetDef* find_snippet(std::string_view name) const;
  friend bool operator==(const Structure&, const Structure&) = default;
};

/// Full scan. Throws SnippetError or MalformedFragment. Fragments may not
/// span marker lines.
Structure scan_structure(TextView text, const LanguageSyntax& syntax);

/// Carries a structure across an edit by moving offsets. Returns nullopt
/// when the edit could change how the text lexes (it touches a comment, a
/// string or a marker line, or brings a delimiter into being), in which
/// case the caller must rescan. `new_text` is the text after the edit.
std::optional<Structure> transform_structure(const Structure& structure,
                                             const LanguageSyntax& syntax, TextView old_text,
                                             const sync::Operation& op, TextView new_text);

/// A contiguous visible raw range and where it starts in the view.
struct Piece {
  Range raw;
  std::size_t view_begin = 0;
  bool variant = false;     ///< Active variant of a fragment.
  bool in_comment = false;  ///< Active variant that lives inside a comment.
};

/// Presentation view of a raw document region with its position map.
struct Projection {
  Text view_text;
  Range region;
  std::size_t raw_length = 0;
  std::vector<Piece> pieces;
  std::vector<Range> hidden_ranges;
  FragmentState fragment_state;
  /// Visible line breaks directly in front of a hidden marker line. Deleting
  /// one would pull code onto the marker line.
  std::vector<std::size_t> guarded_breaks;

  [[nodiscard]] std::optional<std::size_t> to_raw(std::size_t view_offset) const;
  /// View offset of a visible raw character, nullopt if it is hidden.
  [[nodiscard]] std::optional<std::size_t> to_view(std::size_t raw_offset) const;
  /// Raw position receiving text inserted at a view position.
  [[nodiscard]] std::size_t insertion_point(std::size_t view_offset) const;
  /// Visible part of a raw range in view coordinates; nullopt when none of
  /// it is visible. Empty ranges map when their position is visible.
  [[nodiscard]] std::optional<Range> to_view_range(Range raw) const;
};

/// Projects a region (a snippet, or the whole text) of a scanned document.
/// Throws std::out_of_range for unknown snippets or invalid fragment state.
Projection project(TextView text, const Structure& structure,
                   const std::optional<std::string>& snippet, const FragmentState& state,
                   bool strip_markers);

/// Convenience form that scans the text first.
Projection project(TextView text, const LanguageSyntax& syntax,
                   const std::optional<SnippetDef>& snippet, const FragmentState& state,
                   bool strip_markers);

class EditRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Turns an edit of the view into the raw edit with the same visible effect.
/// Insertions at a boundary between visible and hidden text stay on the
/// visible side. With `syntax`, text inserted into a commented variant may
/// not contain comment delimiters. Throws EditRejected.
sync::Operation map_view_edit(const Projection& projection, const sync::Operation& view_op,
                              const LanguageSyntax* syntax = nullptr);

/// The view-level effect of a raw edit: turns `before.view_text` into
/// `after.view_text`. `raw_op` must transform the text `before` was projected
/// from into the one `after` was projected from.
sync::Operation map_raw_edit(const Projection& before, const sync::Operation& raw_op,
                             const Projection& after);

}  // namespace cobra::snippets
