#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobra/snippets/projection.hpp"
#include "cobra/sync/annotation.hpp"
#include "cobra/sync/revision_log.hpp"

namespace cobra::server {

class DocNotFound : public std::out_of_range {
 public:
  explicit DocNotFound(const std::string& id) : std::out_of_range("no document '" + id + "'"), id_(id) {}
  [[nodiscard]] const std::string& id() const { return id_; }

 private:
  std::string id_;
};

/// A raw source text: a file, or the body of an inline code block.
struct Source {
  std::string id;
  std::string language;  ///< Empty for plain text.
  const snippets::LanguageSyntax* syntax = nullptr;
  sync::RevisionLog log;
  snippets::Structure structure;
  snippets::FragmentState fragment_state;
  std::vector<sync::Annotation> annotations;  ///< Raw coordinates.
};

struct ViewSpec {
  std::string id;
  std::string source_id;
  std::optional<std::string> snippet;
  bool strip_markers = true;
};

/// What one client edits: a projection of a source with its own history.
struct View {
  ViewSpec spec;
  sync::RevisionLog log;
  snippets::Projection projection;
};

struct ViewUpdate {
  std::string view_id;
  std::uint64_t seq = 0;
  sync::Operation op;
};

struct EditOutcome {
  std::uint64_t seq = 0;          ///< Seq committed to the edited view.
  sync::Operation view_op;        ///< The edit as committed to that view.
  sync::Operation raw_op;         ///< Its effect on the source.
  std::vector<ViewUpdate> others; ///< Changes to the other views of the source.
};

/// Holds sources and their views and keeps them consistent under edits.
/// Not thread-safe.
class DocumentStore {
 public:
  /// Scans the text for snippets and fragments; throws on malformed ones.
  void add_source(const std::string& id, Text text, const std::string& language);
  /// Throws DocNotFound for an unknown source or snippet.
  void add_view(const ViewSpec& spec);

  [[nodiscard]] bool has_view(const std::string& id) const { return views_.contains(id); }
  [[nodiscard]] bool has_source(const std::string& id) const { return sources_.contains(id); }
  [[nodiscard]] const View& view(const std::string& id) const;
  [[nodiscard]] const Source& source(const std::string& id) const;
  [[nodiscard]] std::vector<std::string> view_ids() const;
  [[nodiscard]] std::vector<std::string> source_ids() const;
  [[nodiscard]] std::vector<std::string> views_of(const std::string& source_id) const;

  /// Applies a client edit made against `parent_seq` of a view. Throws
  /// EditRejected when the edit would damage snippet markers or fragment
  /// syntax, or when the view could not show its effect faithfully.
  EditOutcome edit(const std::string& view_id, sync::ClientId author, std::uint64_t parent_seq,
                   const sync::Operation& op);

  /// Shows variant `variant` of fragment `fragment` of a source. Returns the
  /// resulting changes to its views.
  std::vector<ViewUpdate> step_fragment(const std::string& source_id, std::size_t fragment,
                                        std::size_t variant);

  /// Stores analysis results for a source text at a given revision. Results
  /// for an older revision are moved through the later edits first.
  void set_annotations(const std::string& source_id, std::uint64_t seq,
                       std::vector<sync::Annotation> annotations);

  /// A source's annotations in the coordinates of a view.
  [[nodiscard]] std::vector<sync::Annotation> view_annotations(const std::string& view_id) const;

 private:
  Source& source_mut(const std::string& id);
  snippets::Projection project_view(const Source& src, const ViewSpec& spec) const;

  std::map<std::string, std::unique_ptr<Source>> sources_;
  std::map<std::string, std::unique_ptr<View>> views_;
};

}  // namespace cobra::server
