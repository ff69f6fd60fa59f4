#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cobra/text.hpp"

namespace cobra::sync {

struct Retain {
  std::size_t count = 0;
  friend bool operator==(const Retain&, const Retain&) = default;
};

struct Insert {
  Text text;
  friend bool operator==(const Insert&, const Insert&) = default;
};

struct Delete {
  std::size_t count = 0;
  friend bool operator==(const Delete&, const Delete&) = default;
};

using Component = std::variant<Retain, Insert, Delete>;

class LengthMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A text operation: a sequence of retain/insert/delete components that
/// walks the whole base text. The builder methods keep the component list
/// in normal form: no empty components, no two adjacent components of the
/// same kind, and an insert never directly follows a delete.
class Operation {
 public:
  Operation() = default;

  Operation& retain(std::size_t n);
  Operation& insert(Text text);
  Operation& insert(TextView text) { return insert(Text(text)); }
  Operation& erase(std::size_t n);

  [[nodiscard]] const std::vector<Component>& components() const { return components_; }
  [[nodiscard]] std::size_t base_length() const { return base_length_; }
  [[nodiscard]] std::size_t target_length() const { return target_length_; }

  /// True if applying the operation leaves every text unchanged.
  [[nodiscard]] bool is_noop() const;

  /// Builds an operation from raw components, normalizing them. Used by the
  /// wire decoder; zero-length components are rejected.
  static Operation from_components(const std::vector<Component>& components);

  /// Identity operation over a text of the given length.
  static Operation identity(std::size_t length);

  friend bool operator==(const Operation&, const Operation&) = default;

 private:
  std::vector<Component> components_;
  std::size_t base_length_ = 0;
  std::size_t target_length_ = 0;
};

/// Applies `op` to `text`. Throws LengthMismatch unless
/// text.size() == op.base_length().
Text apply(TextView text, const Operation& op);

/// Returns an operation equivalent to applying `a` then `b`.
Operation compose(const Operation& a, const Operation& b);

/// Transforms two concurrent operations over the same base text. The
/// result (a', b') satisfies apply(apply(t, a), b') == apply(apply(t, b), a').
/// When both insert at the same position, `a`'s text ends up first.
std::pair<Operation, Operation> transform(const Operation& a, const Operation& b);

/// Maps a cursor-like position through `op`. Insertions at exactly `pos`
/// push it right when `insert_before` is true.
std::size_t transform_position(std::size_t pos, const Operation& op, bool insert_before);

std::string describe(const Operation& op);

}  // namespace cobra::sync
