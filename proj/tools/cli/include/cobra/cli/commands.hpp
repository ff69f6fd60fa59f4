#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cobra::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Creates `<parent>/<name>` with a commented cobra.conf and a starter
/// slides.html.
int cmd_new(const std::string& name, const std::filesystem::path& parent, std::ostream& out,
            std::ostream& err);

struct RunOptions {
  std::filesystem::path dir;
  std::optional<std::uint16_t> port;
  std::optional<std::string> interface;
  bool watch = true;
  /// Set to stop the server; polled.
  const std::atomic<bool>* stop = nullptr;
  /// Called once the server accepts connections.
  std::function<void(std::uint16_t port)> on_ready;
};

/// Serves a presentation until `*options.stop` becomes true.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Reports the prerequisites of a language's assistant. `config_dir` may
/// hold a cobra.conf whose env settings are taken into account.
int cmd_configure(const std::string& language, const std::filesystem::path& config_dir,
                  std::ostream& out, std::ostream& err);

/// Speaks the external assistant protocol on `in`/`out` using the demo
/// analysis with the comment syntax of `language`.
int cmd_assist(const std::string& language, std::istream& in, std::ostream& out, std::ostream& err);

/// Full command line handling, including the bare `cobra <dir>` form.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
         const std::atomic<bool>* stop);

}  // namespace cobra::cli
