#include "cobra/config/watcher.hpp"

namespace cobra::config {

ConfigWatcher::ConfigWatcher(std::filesystem::path file, Settings initial, ChangeHandler on_change,
                             ErrorHandler on_error, std::chrono::milliseconds interval)
    : file_(std::move(file)),
      settings_(std::move(initial)),
      on_change_(std::move(on_change)),
      on_error_(std::move(on_error)),
      interval_(interval),
      last_stamp_(stamp()) {}

ConfigWatcher::~ConfigWatcher() { stop(); }

std::optional<std::filesystem::file_time_type> ConfigWatcher::stamp() const {
  std::error_code ec;
  auto t = std::filesystem::last_write_time(file_, ec);
  if (ec) return std::nullopt;
  return t;
}

void ConfigWatcher::start() {
  if (thread_.joinable()) return;
  stopping_ = false;
  thread_ = std::thread([this] {
    std::unique_lock lock(wait_mutex_);
    while (!stopping_) {
      wake_.wait_for(lock, interval_, [this] { return stopping_; });
      if (stopping_) break;
      lock.unlock();
      poll_once();
      lock.lock();
    }
  });
}

void ConfigWatcher::stop() {
  {
    std::lock_guard lock(wait_mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (thread_.joinable()) thread_.join();
}

bool ConfigWatcher::poll_once() {
  const auto now = stamp();
  Settings before;
  {
    std::lock_guard lock(mutex_);
    if (now == last_stamp_) return false;
    last_stamp_ = now;
    before = settings_;
  }
  Settings after;
  std::vector<std::string> warnings;
  try {
    after = load_settings(file_.string(), &warnings);
  } catch (const std::exception& e) {
    if (on_error_) on_error_(e.what());
    return false;
  }
  for (const auto& w : warnings) {
    if (on_error_) on_error_(w);
  }
  auto changes = diff_settings(before, after);
  if (changes.empty()) return false;
  {
    std::lock_guard lock(mutex_);
    settings_ = after;
  }
  if (on_change_) on_change_(after, changes);
  return true;
}

Settings ConfigWatcher::current() const {
  std::lock_guard lock(mutex_);
  return settings_;
}

}  // namespace cobra::config
