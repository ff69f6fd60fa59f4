#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cobra/sync/operation.hpp"
#include "cobra/text.hpp"

namespace cobra::sync {

enum class AnnotationKind : std::uint8_t { error = 0, warning = 1, info = 2, token = 3 };

std::string_view to_string(AnnotationKind kind);
/// Parses "error" | "warning" | "info" | "token"; throws std::invalid_argument.
AnnotationKind annotation_kind_from_string(std::string_view name);

/// A ranged semantic fact about a document revision. `class_name` carries
/// the token class for token annotations ("keyword", "number", ...) and an
/// optional refinement for others ("state" for proof states). An empty
/// message means none.
struct Annotation {
  Range range;
  AnnotationKind kind = AnnotationKind::info;
  std::string class_name;
  std::string message;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

bool operator<(const Annotation& a, const Annotation& b);

/// Moves annotations across an edit. Insertions before a range shift it,
/// insertions strictly inside grow it, and a non-empty range whose
/// characters are all deleted is dropped.
std::vector<Annotation> transform_annotations(const std::vector<Annotation>& annotations,
                                              const Operation& op);

}  // namespace cobra::sync
