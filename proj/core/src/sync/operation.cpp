#include "cobra/sync/operation.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace cobra::sync {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t length_of(const Component& c) {
  return std::visit(overloaded{[](const Retain& r) { return r.count; },
                               [](const Insert& i) { return i.text.size(); },
                               [](const Delete& d) { return d.count; }},
                    c);
}

// Walks the components of an operation while allowing the caller to consume
// a component partially.
class Cursor {
 public:
  explicit Cursor(const Operation& op) : components_(op.components()) { load(); }

  [[nodiscard]] bool done() const { return !current_.has_value(); }
  [[nodiscard]] const Component& get() const { return *current_; }
  [[nodiscard]] std::size_t length() const { return length_of(*current_); }

  // Consumes n characters of the current component.
  void advance(std::size_t n) {
    const std::size_t len = length();
    if (n >= len) {
      ++index_;
      load();
      return;
    }
    std::visit(overloaded{[&](Retain& r) { r.count -= n; },
                          [&](Insert& i) { i.text.erase(0, n); },
                          [&](Delete& d) { d.count -= n; }},
               *current_);
  }

 private:
  void load() {
    if (index_ < components_.size()) {
      current_ = components_[index_];
    } else {
      current_.reset();
    }
  }

  const std::vector<Component>& components_;
  std::size_t index_ = 0;
  std::optional<Component> current_;
};

}  // namespace

Operation& Operation::retain(std::size_t n) {
  if (n == 0) return *this;
  base_length_ += n;
  target_length_ += n;
  if (!components_.empty()) {
    if (auto* last = std::get_if<Retain>(&components_.back())) {
      last->count += n;
      return *this;
    }
  }
  components_.emplace_back(Retain{n});
  return *this;
}

Operation& Operation::insert(Text text) {
  if (text.empty()) return *this;
  target_length_ += text.size();
  if (!components_.empty()) {
    if (auto* last = std::get_if<Insert>(&components_.back())) {
      last->text += text;
      return *this;
    }
    if (std::holds_alternative<Delete>(components_.back())) {
      // Inserts go before deletes so equivalent operations compare equal.
      if (components_.size() >= 2) {
        if (auto* prev = std::get_if<Insert>(&components_[components_.size() - 2])) {
          prev->text += text;
          return *this;
        }
      }
      components_.insert(components_.end() - 1, Insert{std::move(text)});
      return *this;
    }
  }
  components_.emplace_back(Insert{std::move(text)});
  return *this;
}

Operation& Operation::erase(std::size_t n) {
  if (n == 0) return *this;
  base_length_ += n;
  if (!components_.empty()) {
    if (auto* last = std::get_if<Delete>(&components_.back())) {
      last->count += n;
      return *this;
    }
  }
  components_.emplace_back(Delete{n});
  return *this;
}

bool Operation::is_noop() const {
  return components_.empty() ||
         (components_.size() == 1 && std::holds_alternative<Retain>(components_.front()));
}

Operation Operation::from_components(const std::vector<Component>& components) {
  Operation op;
  for (const auto& c : components) {
    if (length_of(c) == 0) throw std::invalid_argument("empty operation component");
    std::visit(overloaded{[&](const Retain& r) { op.retain(r.count); },
                          [&](const Insert& i) { op.insert(i.text); },
                          [&](const Delete& d) { op.erase(d.count); }},
               c);
  }
  return op;
}

Operation Operation::identity(std::size_t length) {
  Operation op;
  op.retain(length);
  return op;
}

Text apply(TextView text, const Operation& op) {
  if (text.size() != op.base_length()) {
    throw LengthMismatch("apply: text length " + std::to_string(text.size()) +
                         " does not match operation base length " +
                         std::to_string(op.base_length()));
  }
  Text out;
  out.reserve(op.target_length());
  std::size_t pos = 0;
  for (const auto& c : op.components()) {
    std::visit(overloaded{[&](const Retain& r) {
                            out.append(text.substr(pos, r.count));
                            pos += r.count;
                          },
                          [&](const Insert& i) { out += i.text; },
                          [&](const Delete& d) { pos += d.count; }},
               c);
  }
  return out;
}

Operation compose(const Operation& a, const Operation& b) {
  if (a.target_length() != b.base_length()) {
    throw LengthMismatch("compose: first target length " + std::to_string(a.target_length()) +
                         " != second base length " + std::to_string(b.base_length()));
  }
  Operation out;
  Cursor ca(a);
  Cursor cb(b);
  while (!ca.done() || !cb.done()) {
    if (!ca.done() && std::holds_alternative<Delete>(ca.get())) {
      out.erase(ca.length());
      ca.advance(ca.length());
      continue;
    }
    if (!cb.done() && std::holds_alternative<Insert>(cb.get())) {
      out.insert(std::get<Insert>(cb.get()).text);
      cb.advance(cb.length());
      continue;
    }
    if (ca.done() || cb.done()) {
      throw LengthMismatch("compose: operations have incompatible lengths");
    }
    const std::size_t n = std::min(ca.length(), cb.length());
    const Component& x = ca.get();
    const Component& y = cb.get();
    if (std::holds_alternative<Retain>(x) && std::holds_alternative<Retain>(y)) {
      out.retain(n);
    } else if (std::holds_alternative<Retain>(x) && std::holds_alternative<Delete>(y)) {
      out.erase(n);
    } else if (std::holds_alternative<Insert>(x) && std::holds_alternative<Retain>(y)) {
      out.insert(std::get<Insert>(x).text.substr(0, n));
    }
    // Insert followed by delete cancels out.
    ca.advance(n);
    cb.advance(n);
  }
  return out;
}

std::pair<Operation, Operation> transform(const Operation& a, const Operation& b) {
  if (a.base_length() != b.base_length()) {
    throw LengthMismatch("transform: base lengths differ (" + std::to_string(a.base_length()) +
                         " vs " + std::to_string(b.base_length()) + ")");
  }
  Operation a_prime;
  Operation b_prime;
  Cursor ca(a);
  Cursor cb(b);
  while (!ca.done() || !cb.done()) {
    if (!ca.done() && std::holds_alternative<Insert>(ca.get())) {
      const auto& text = std::get<Insert>(ca.get()).text;
      a_prime.insert(text);
      b_prime.retain(text.size());
      ca.advance(ca.length());
      continue;
    }
    if (!cb.done() && std::holds_alternative<Insert>(cb.get())) {
      const auto& text = std::get<Insert>(cb.get()).text;
      a_prime.retain(text.size());
      b_prime.insert(text);
      cb.advance(cb.length());
      continue;
    }
    if (ca.done() || cb.done()) {
      throw LengthMismatch("transform: operations have incompatible lengths");
    }
    const std::size_t n = std::min(ca.length(), cb.length());
    const bool x_retain = std::holds_alternative<Retain>(ca.get());
    const bool y_retain = std::holds_alternative<Retain>(cb.get());
    if (x_retain && y_retain) {
      a_prime.retain(n);
      b_prime.retain(n);
    } else if (!x_retain && y_retain) {
      a_prime.erase(n);
    } else if (x_retain && !y_retain) {
      b_prime.erase(n);
    }
    // Both delete the same characters: nothing left to do on either side.
    ca.advance(n);
    cb.advance(n);
  }
  return {std::move(a_prime), std::move(b_prime)};
}

std::size_t transform_position(std::size_t pos, const Operation& op, bool insert_before) {
  std::size_t old_at = 0;
  std::size_t result = pos;
  for (const auto& c : op.components()) {
    if (old_at > pos) break;
    if (const auto* r = std::get_if<Retain>(&c)) {
      old_at += r->count;
    } else if (const auto* i = std::get_if<Insert>(&c)) {
      if (old_at < pos || (old_at == pos && insert_before)) result += i->text.size();
    } else if (const auto* d = std::get_if<Delete>(&c)) {
      if (old_at < pos) result -= std::min(d->count, pos - old_at);
      old_at += d->count;
    }
  }
  return result;
}

std::string describe(const Operation& op) {
  std::ostringstream out;
  out << '[';
  bool first = true;
  for (const auto& c : op.components()) {
    if (!first) out << ", ";
    first = false;
    std::visit(overloaded{[&](const Retain& r) { out << "retain " << r.count; },
                          [&](const Insert& i) { out << "insert \"" << to_utf8(i.text) << '"'; },
                          [&](const Delete& d) { out << "delete " << d.count; }},
               c);
  }
  out << ']';
  return out.str();
}

}  // namespace cobra::sync
