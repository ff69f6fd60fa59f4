#include "cobra/sync/annotation.hpp"

#include <stdexcept>
#include <tuple>

namespace cobra::sync {

std::string_view to_string(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::error:
      return "error";
    case AnnotationKind::warning:
      return "warning";
    case AnnotationKind::info:
      return "info";
    case AnnotationKind::token:
      return "token";
  }
  return "info";
}

AnnotationKind annotation_kind_from_string(std::string_view name) {
  if (name == "error") return AnnotationKind::error;
  if (name == "warning") return AnnotationKind::warning;
  if (name == "info") return AnnotationKind::info;
  if (name == "token") return AnnotationKind::token;
  throw std::invalid_argument("unknown annotation kind '" + std::string(name) + "'");
}

bool operator<(const Annotation& a, const Annotation& b) {
  return std::tie(a.range.begin, a.range.end, a.kind, a.class_name, a.message) <
         std::tie(b.range.begin, b.range.end, b.kind, b.class_name, b.message);
}

std::vector<Annotation> transform_annotations(const std::vector<Annotation>& annotations,
                                              const Operation& op) {
  std::vector<Annotation> out;
  out.reserve(annotations.size());
  for (const auto& ann : annotations) {
    // An insertion at the start shifts the range; one at the end stays
    // outside it. Only strictly interior insertions grow the range.
    const std::size_t begin = transform_position(ann.range.begin, op, true);
    const std::size_t end = ann.range.empty() ? begin : transform_position(ann.range.end, op, false);
    if (!ann.range.empty() && begin >= end) continue;
    Annotation moved = ann;
    moved.range = Range{begin, end};
    out.push_back(std::move(moved));
  }
  return out;
}

}  // namespace cobra::sync
