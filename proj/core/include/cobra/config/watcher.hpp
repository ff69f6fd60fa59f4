#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cobra/config/settings.hpp"

namespace cobra::config {

/// Polls a configuration file's modification time and reports settings
/// changes. A file that fails to parse leaves the current settings in place.
class ConfigWatcher {
 public:
  using ChangeHandler = std::function<void(const Settings&, const std::vector<SettingChange>&)>;
  using ErrorHandler = std::function<void(const std::string&)>;

  ConfigWatcher(std::filesystem::path file, Settings initial, ChangeHandler on_change,
                ErrorHandler on_error = {},
                std::chrono::milliseconds interval = std::chrono::milliseconds(500));
  ~ConfigWatcher();

  ConfigWatcher(const ConfigWatcher&) = delete;
  ConfigWatcher& operator=(const ConfigWatcher&) = delete;

  void start();
  void stop();

  /// One poll step; true when the settings changed.
  bool poll_once();

  [[nodiscard]] Settings current() const;

 private:
  std::optional<std::filesystem::file_time_type> stamp() const;

  std::filesystem::path file_;
  Settings settings_;
  ChangeHandler on_change_;
  ErrorHandler on_error_;
  std::chrono::milliseconds interval_;
  std::optional<std::filesystem::file_time_type> last_stamp_;
  mutable std::mutex mutex_;
  std::mutex wait_mutex_;
  std::condition_variable wake_;
  bool stopping_ = false;
  std::thread thread_;
};

}  // namespace cobra::config
