#include "cobra/config/settings.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cobra/assets.hpp"

namespace cobra::config {

namespace {

constexpr std::pair<Transition, std::string_view> kTransitions[] = {
    {Transition::none, "none"},     {Transition::fade, "fade"},       {Transition::slide, "slide"},
    {Transition::convex, "convex"}, {Transition::concave, "concave"}, {Transition::zoom, "zoom"},
};

// Paths read by resolve(); anything else outside the open namespaces warns.
constexpr std::string_view kKnown[] = {
    "title",           "language",          "theme.slides",        "theme.code",
    "binding.interface", "binding.port",    "reveal.transition",   "show.infos",
    "show.warnings",   "assistant.debounce", "assistant.timeout",
};

std::string format_double(double d) {
  std::ostringstream os;
  os << d;
  return os.str();
}

class Reader {
 public:
  explicit Reader(const ConfigTree& tree) : tree_(tree) {}

  const ConfigValue& need(const std::string& path) const {
    const ConfigValue* v = tree_.find(path);
    if (!v) throw TypeMismatch(path, "a value", "nothing");
    return *v;
  }

  std::string string(const std::string& path) const {
    const ConfigValue& v = need(path);
    if (v.is_object()) throw TypeMismatch(path, "string", "object");
    if (const auto* s = std::get_if<std::string>(&v.value)) return *s;
    return v.raw;
  }

  std::int64_t integer(const std::string& path) const {
    const ConfigValue& v = need(path);
    if (const auto* n = std::get_if<std::int64_t>(&v.value)) return *n;
    if (const auto* s = std::get_if<std::string>(&v.value)) {
      std::int64_t n = 0;
      auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), n);
      if (ec == std::errc{} && ptr == s->data() + s->size() && !s->empty()) return n;
    }
    throw TypeMismatch(path, "integer", std::string(v.type_name()));
  }

  bool boolean(const std::string& path) const {
    const ConfigValue& v = need(path);
    if (const auto* b = std::get_if<bool>(&v.value)) return *b;
    if (const auto* s = std::get_if<std::string>(&v.value)) {
      if (*s == "true") return true;
      if (*s == "false") return false;
    }
    throw TypeMismatch(path, "boolean", std::string(v.type_name()));
  }

  const ConfigObject* object(const std::string& path) const {
    const ConfigValue* v = tree_.find(path);
    if (!v) return nullptr;
    if (!v->is_object()) throw TypeMismatch(path, "object", std::string(v->type_name()));
    return &std::get<ConfigObject>(v->value);
  }

 private:
  const ConfigTree& tree_;
};

Scalar to_scalar(const ConfigValue& v) {
  switch (v.value.index()) {
    case 0: return std::get<std::string>(v.value);
    case 1: return std::get<std::int64_t>(v.value);
    case 2: return std::get<bool>(v.value);
    default: return std::get<double>(v.value);
  }
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

std::string_view to_string(Transition t) {
  for (const auto& [v, name] : kTransitions) {
    if (v == t) return name;
  }
  return "slide";
}

std::optional<Transition> transition_from_string(std::string_view s) {
  for (const auto& [v, name] : kTransitions) {
    if (name == s) return v;
  }
  return std::nullopt;
}

TypeMismatch::TypeMismatch(std::string path, std::string expected, std::string found)
    : std::runtime_error("setting '" + path + "': expected " + expected + ", found " + found),
      path_(std::move(path)),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string scalar_to_string(const Scalar& v) {
  switch (v.index()) {
    case 0: return std::get<std::string>(v);
    case 1: return std::to_string(std::get<std::int64_t>(v));
    case 2: return std::get<bool>(v) ? "true" : "false";
    default: return format_double(std::get<double>(v));
  }
}

const ConfigTree& reference_config() {
  static const ConfigTree tree = parse_config(*embedded_asset("reference.conf"), "reference.conf");
  return tree;
}

Settings resolve(const ConfigTree& user, const ConfigTree& defaults,
                 std::vector<std::string>* warnings) {
  // Object-shaped settings given a scalar are type errors, not overrides.
  for (const char* group : {"theme", "binding", "reveal", "show", "assistant", "env", "mathjax"}) {
    if (const ConfigValue* v = user.find(group); v && !v->is_object()) {
      throw TypeMismatch(group, "object", std::string(v->type_name()));
    }
  }

  const ConfigTree merged = merge(defaults, user);
  const Reader r(merged);
  Settings s;
  s.title = r.string("title");
  s.language = r.string("language");
  s.theme_slides = r.string("theme.slides");
  s.theme_code = r.string("theme.code");
  s.binding_interface = r.string("binding.interface");
  const std::int64_t port = r.integer("binding.port");
  if (port < 0 || port > 65535) throw TypeMismatch("binding.port", "port number", std::to_string(port));
  s.binding_port = static_cast<std::uint16_t>(port);
  const std::string transition = r.string("reveal.transition");
  const auto t = transition_from_string(transition);
  if (!t) {
    throw TypeMismatch("reveal.transition", "one of none, fade, slide, convex, concave, zoom",
                       "'" + transition + "'");
  }
  s.reveal_transition = *t;
  s.show_infos = r.boolean("show.infos");
  s.show_warnings = r.boolean("show.warnings");
  s.assistant_debounce_ms = r.integer("assistant.debounce");
  s.assistant_timeout_ms = r.integer("assistant.timeout");

  if (const ConfigObject* assistants = r.object("assistant")) {
    for (const auto& [lang, value] : *assistants) {
      if (!value.is_object()) continue;
      s.assistant_commands[lang] = r.string("assistant." + lang + ".command");
    }
  }

  for (const auto& [path, value] : merged.leaves()) {
    if (starts_with(path, "env.")) {
      s.env[path.substr(4)] = value->is_object() ? "" : scalar_to_string(to_scalar(*value));
    } else if ((starts_with(path, "reveal.") && path != "reveal.transition") ||
               starts_with(path, "mathjax.")) {
      s.passthrough[path] = to_scalar(*value);
    }
  }

  if (warnings) {
    for (const auto& [path, value] : user.leaves()) {
      if (starts_with(path, "env.") || starts_with(path, "reveal.") ||
          starts_with(path, "mathjax.")) {
        continue;
      }
      bool known = false;
      for (auto k : kKnown) known = known || k == path;
      if (starts_with(path, "assistant.")) {
        const auto segs = split_path(path);
        known = known || (segs.size() == 3 && segs[2] == "command");
      }
      if (!known) {
        warnings->push_back(user.source() + ":" + std::to_string(value->line) + ": unknown setting '" +
                            path + "'");
      }
    }
  }
  return s;
}

Settings load_settings(const std::string& path, std::vector<std::string>* warnings) {
  if (!std::filesystem::exists(path)) return resolve(ConfigTree{}, reference_config(), warnings);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return resolve(parse_config(buffer.str(), path), reference_config(), warnings);
}

std::map<std::string, std::string> flatten(const Settings& s) {
  std::map<std::string, std::string> out{
      {"title", s.title},
      {"language", s.language},
      {"theme.slides", s.theme_slides},
      {"theme.code", s.theme_code},
      {"binding.interface", s.binding_interface},
      {"binding.port", std::to_string(s.binding_port)},
      {"reveal.transition", std::string(to_string(s.reveal_transition))},
      {"show.infos", s.show_infos ? "true" : "false"},
      {"show.warnings", s.show_warnings ? "true" : "false"},
      {"assistant.debounce", std::to_string(s.assistant_debounce_ms)},
      {"assistant.timeout", std::to_string(s.assistant_timeout_ms)},
  };
  for (const auto& [lang, cmd] : s.assistant_commands) out["assistant." + lang + ".command"] = cmd;
  for (const auto& [k, v] : s.env) out["env." + k] = v;
  for (const auto& [k, v] : s.passthrough) out[k] = scalar_to_string(v);
  return out;
}

std::vector<SettingChange> diff_settings(const Settings& before, const Settings& after) {
  const auto a = flatten(before);
  const auto b = flatten(after);
  std::map<std::string, SettingChange> changes;
  for (const auto& [path, value] : a) {
    auto it = b.find(path);
    const std::string next = it == b.end() ? "" : it->second;
    if (it == b.end() || it->second != value) changes[path] = {path, value, next, true};
  }
  for (const auto& [path, value] : b) {
    if (!a.contains(path)) changes[path] = {path, "", value, true};
  }
  std::vector<SettingChange> out;
  for (auto& [path, change] : changes) {
    change.hot = path != "binding.interface";
    out.push_back(std::move(change));
  }
  return out;
}

}  // namespace cobra::config
