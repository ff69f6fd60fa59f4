#include "cobra/assist/assistant.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include <json.hpp>

#include "cobra/assist/demo.hpp"
#include "cobra/assist/subprocess.hpp"

namespace cobra::assist {

using sync::Annotation;
using sync::AnnotationKind;

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::vector<Prerequisite> prerequisites_for(const std::string& language, const std::string& program) {
  std::vector<Prerequisite> out;
  if (language == "isabelle") {
    out.push_back({"ISABELLE_HOME", Prerequisite::Probe::env_var,
                   "set env.isabelle_home in cobra.conf to the Isabelle installation directory"});
  }
  if (language != "demo" && !program.empty()) {
    out.push_back({program, Prerequisite::Probe::executable,
                   "install " + program + " and put it on PATH, or set assistant." + language +
                       ".command in cobra.conf"});
  }
  return out;
}

Annotation failure(TextView text, const std::string& message) {
  return {{0, text.size()}, AnnotationKind::error, "assistant", message};
}

}  // namespace

std::vector<std::string> split_command(const std::string& line) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      in_word = true;
    } else if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
      if (in_word) words.push_back(cur);
      cur.clear();
      in_word = false;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (in_word) words.push_back(cur);
  return words;
}

AssistantSpec assistant_spec(const std::string& language, const config::Settings& settings) {
  if (snippets::find_language(language) == nullptr) throw UnknownLanguage(language);
  AssistantSpec spec;
  spec.language = language;
  spec.debounce_ms = settings.assistant_debounce_ms;
  spec.timeout_ms = settings.assistant_timeout_ms;
  for (const auto& [k, v] : settings.env) spec.env[upper(k)] = v;
  const auto it = settings.assistant_commands.find(language);
  if (language == "demo" || it == settings.assistant_commands.end() || it->second.empty()) {
    return spec;
  }
  spec.mode = AssistantSpec::Mode::external;
  spec.command = split_command(it->second);
  spec.prerequisites = prerequisites_for(language, spec.command.empty() ? "" : spec.command[0]);
  return spec;
}

Report check_prereqs(const AssistantSpec& spec, const std::map<std::string, std::string>& env) {
  Report report;
  auto lookup = [&](const std::string& name) -> std::string {
    if (auto it = env.find(name); it != env.end()) return it->second;
    const char* v = std::getenv(name.c_str());
    return v != nullptr ? v : "";
  };
  for (const auto& p : spec.prerequisites) {
    PrereqStatus st;
    st.name = p.name;
    if (p.probe == Prerequisite::Probe::env_var) {
      st.ok = !lookup(p.name).empty();
    } else {
      st.ok = find_executable(p.name, lookup("PATH"));
    }
    if (!st.ok) st.advice = p.advice;
    report.ok = report.ok && st.ok;
    report.items.push_back(std::move(st));
  }
  return report;
}

std::vector<Annotation> DemoAssistant::analyze(const std::string&, TextView text) {
  return demo_analyze(text, *syntax_);
}

ExternalAssistant::ExternalAssistant(std::vector<std::string> command,
                                     std::map<std::string, std::string> env,
                                     std::chrono::milliseconds timeout)
    : command_(std::move(command)), env_(std::move(env)), timeout_(timeout) {}

ExternalAssistant::~ExternalAssistant() = default;

std::string ExternalAssistant::name() const { return command_.empty() ? "" : command_[0]; }

std::string encode_request(std::uint64_t id, const std::string& doc_id, TextView text) {
  nlohmann::json j = {{"id", id}, {"doc", doc_id}, {"text", to_utf8(text)}};
  return j.dump();
}

std::vector<Annotation> parse_response(const std::string& line, std::uint64_t expected_id) {
  const auto j = nlohmann::json::parse(line);
  if (!j.is_object() || j.value("id", std::uint64_t{0}) != expected_id) {
    throw std::runtime_error("response for another request");
  }
  std::vector<Annotation> out;
  for (const auto& a : j.at("annotations")) {
    Annotation ann;
    ann.range.begin = a.at("start").get<std::size_t>();
    ann.range.end = a.at("end").get<std::size_t>();
    if (ann.range.end < ann.range.begin) throw std::runtime_error("inverted range");
    ann.kind = sync::annotation_kind_from_string(a.at("kind").get<std::string>());
    ann.class_name = a.value("class", "");
    ann.message = a.value("message", "");
    out.push_back(std::move(ann));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Annotation> ExternalAssistant::analyze(const std::string& doc_id, TextView text) {
  const std::uint64_t id = next_id_++;
  try {
    if (!process_ || !process_->running()) process_ = std::make_unique<Subprocess>(command_, env_);
    process_->write_line(encode_request(id, doc_id, text));
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    while (true) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      const auto line = left.count() > 0 ? process_->read_line(left) : std::nullopt;
      if (!line) {
        process_.reset();
        return {failure(text, name() + " timed out")};
      }
      if (line->empty()) continue;
      auto anns = parse_response(*line, id);
      for (const auto& a : anns) {
        if (a.range.end > text.size()) throw std::runtime_error("range outside the document");
      }
      return anns;
    }
  } catch (const std::exception& e) {
    process_.reset();
    return {failure(text, name() + " failed: " + e.what())};
  }
}

std::unique_ptr<Assistant> make_assistant(const AssistantSpec& spec,
                                          const std::map<std::string, std::string>& env,
                                          std::vector<std::string>* warnings) {
  const auto* syntax = snippets::find_language(spec.language);
  if (syntax == nullptr) throw UnknownLanguage(spec.language);
  if (spec.mode == AssistantSpec::Mode::external) {
    const Report report = check_prereqs(spec, env);
    if (report.ok && !spec.command.empty()) {
      return std::make_unique<ExternalAssistant>(spec.command, spec.env,
                                                 std::chrono::milliseconds(spec.timeout_ms));
    }
    if (warnings != nullptr) {
      std::string missing;
      for (const auto& item : report.items) {
        if (!item.ok) missing += (missing.empty() ? "" : ", ") + item.name;
      }
      warnings->push_back(spec.language + " assistant unavailable (missing " + missing +
                          "); using the demo analysis");
    }
  }
  return std::make_unique<DemoAssistant>(*syntax);
}

}  // namespace cobra::assist
