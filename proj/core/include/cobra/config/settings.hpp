#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cobra/config/config_tree.hpp"

namespace cobra::config {

enum class Transition { none, fade, slide, convex, concave, zoom };

std::string_view to_string(Transition t);
std::optional<Transition> transition_from_string(std::string_view s);

using Scalar = std::variant<std::string, std::int64_t, bool, double>;

struct Settings {
  std::string title;
  std::string language;  ///< Empty: code blocks without a language are plain text.
  std::string theme_slides;
  std::string theme_code;
  std::string binding_interface;
  std::uint16_t binding_port = 0;
  Transition reveal_transition = Transition::slide;
  bool show_infos = true;
  bool show_warnings = true;
  std::int64_t assistant_debounce_ms = 200;
  std::int64_t assistant_timeout_ms = 10000;
  std::map<std::string, std::string> assistant_commands;  ///< language id -> command line
  std::map<std::string, std::string> env;
  /// Other `reveal.*` and `mathjax.*` keys, handed to the client unchanged.
  std::map<std::string, Scalar> passthrough;

  friend bool operator==(const Settings&, const Settings&) = default;
};

class TypeMismatch : public std::runtime_error {
 public:
  TypeMismatch(std::string path, std::string expected, std::string found);

  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] const std::string& expected() const { return expected_; }
  [[nodiscard]] const std::string& found() const { return found_; }

 private:
  std::string path_;
  std::string expected_;
  std::string found_;
};

/// The built-in reference configuration.
const ConfigTree& reference_config();

/// Overlays `user` on `defaults` and reads typed settings. Unknown keys
/// (outside `env`, `reveal` and `mathjax`) are reported to `warnings`.
/// Throws TypeMismatch.
Settings resolve(const ConfigTree& user, const ConfigTree& defaults,
                 std::vector<std::string>* warnings = nullptr);

/// Reads `path` if it exists, otherwise uses only the defaults.
Settings load_settings(const std::string& path, std::vector<std::string>* warnings = nullptr);

struct SettingChange {
  std::string path;
  std::string old_value;
  std::string new_value;
  bool hot = true;  ///< Applied without restarting the server.
  friend bool operator==(const SettingChange&, const SettingChange&) = default;
};

/// Setting values flattened to dotted paths, as shown to users.
std::map<std::string, std::string> flatten(const Settings& s);

/// Changed settings in path order. Only binding.interface is not hot.
std::vector<SettingChange> diff_settings(const Settings& before, const Settings& after);

std::string scalar_to_string(const Scalar& v);

}  // namespace cobra::config
