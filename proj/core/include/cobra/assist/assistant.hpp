#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobra/config/settings.hpp"
#include "cobra/snippets/language.hpp"
#include "cobra/sync/annotation.hpp"
#include "cobra/text.hpp"

namespace cobra::assist {

class Subprocess;

struct Prerequisite {
  enum class Probe { env_var, executable };
  std::string name;  ///< Variable or executable name.
  Probe probe = Probe::executable;
  std::string advice;
};

struct AssistantSpec {
  enum class Mode { builtin_demo, external };
  std::string language;
  Mode mode = Mode::builtin_demo;
  std::vector<std::string> command;  ///< Program and arguments.
  std::map<std::string, std::string> env;
  std::int64_t debounce_ms = 200;
  std::int64_t timeout_ms = 10000;
  std::vector<Prerequisite> prerequisites;
};

class UnknownLanguage : public std::invalid_argument {
 public:
  explicit UnknownLanguage(const std::string& id)
      : std::invalid_argument("unknown language '" + id + "'"), id_(id) {}
  [[nodiscard]] const std::string& id() const { return id_; }

 private:
  std::string id_;
};

/// The assistant for a language as configured. `env.*` keys become
/// environment variables with uppercased names. Throws UnknownLanguage.
AssistantSpec assistant_spec(const std::string& language, const config::Settings& settings);

struct PrereqStatus {
  std::string name;
  bool ok = false;
  std::string advice;  ///< Empty when ok.
};

struct Report {
  bool ok = true;
  std::vector<PrereqStatus> items;
};

/// Probes each prerequisite. `env` is looked at first and the process
/// environment second; executables are searched on env["PATH"] if set.
Report check_prereqs(const AssistantSpec& spec, const std::map<std::string, std::string>& env);

/// Splits a command line at whitespace; double quotes group words.
std::vector<std::string> split_command(const std::string& line);

/// Analyses whole document texts. Implementations are called from one
/// pipeline thread at a time.
class Assistant {
 public:
  virtual ~Assistant() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  virtual std::vector<sync::Annotation> analyze(const std::string& doc_id, TextView text) = 0;
};

class DemoAssistant : public Assistant {
 public:
  explicit DemoAssistant(const snippets::LanguageSyntax& syntax) : syntax_(&syntax) {}
  [[nodiscard]] std::string name() const override { return "demo"; }
  std::vector<sync::Annotation> analyze(const std::string& doc_id, TextView text) override;

 private:
  const snippets::LanguageSyntax* syntax_;
};

/// A child process speaking newline-delimited JSON. Requests are
/// `{"id":n,"doc":d,"text":t}`; responses `{"id":n,"annotations":[...]}`
/// with scalar-value offsets. The process is started on first use and
/// restarted after a failure. A crash, a timeout or a malformed reply
/// yields one error annotation over the whole text.
class ExternalAssistant : public Assistant {
 public:
  ExternalAssistant(std::vector<std::string> command, std::map<std::string, std::string> env,
                    std::chrono::milliseconds timeout);
  ~ExternalAssistant() override;
  [[nodiscard]] std::string name() const override;
  std::vector<sync::Annotation> analyze(const std::string& doc_id, TextView text) override;

 private:
  std::vector<std::string> command_;
  std::map<std::string, std::string> env_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<Subprocess> process_;
  std::uint64_t next_id_ = 1;
};

/// The assistant for a spec. An external spec whose prerequisites are not
/// met falls back to the demo assistant and adds a warning.
std::unique_ptr<Assistant> make_assistant(const AssistantSpec& spec,
                                          const std::map<std::string, std::string>& env,
                                          std::vector<std::string>* warnings = nullptr);

/// Parses one response line. Throws std::runtime_error when malformed.
std::vector<sync::Annotation> parse_response(const std::string& line, std::uint64_t expected_id);
std::string encode_request(std::uint64_t id, const std::string& doc_id, TextView text);

}  // namespace cobra::assist
