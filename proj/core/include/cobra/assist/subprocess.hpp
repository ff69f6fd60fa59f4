#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <sys/types.h>
#include <vector>

namespace cobra::assist {

class SubprocessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A child process with line-oriented pipes to its stdin and stdout.
/// Stderr is discarded.
class Subprocess {
 public:
  /// Runs `argv[0]` found via PATH. `env` entries are added to (and
  /// override) the inherited environment. Throws SubprocessError.
  Subprocess(const std::vector<std::string>& argv, const std::map<std::string, std::string>& env = {});
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  /// Writes `line` plus a newline. Throws SubprocessError if the pipe is closed.
  void write_line(const std::string& line);
  /// Next line without its newline; nullopt on timeout. Throws
  /// SubprocessError at end of output.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

  [[nodiscard]] bool running();
  void kill();
  [[nodiscard]] pid_t pid() const { return pid_; }

 private:
  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
  bool reaped_ = false;
};

/// Whether an executable of this name is on PATH (or is a path to one).
bool find_executable(const std::string& name, const std::string& path_env = "");

}  // namespace cobra::assist
