#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cobra/assist/assistant.hpp"

namespace cobra::assist {

struct AnnotationBatch {
  std::string doc_id;
  std::uint64_t for_seq = 0;
  std::vector<sync::Annotation> annotations;
};

/// Debounces analysis requests for one assistant and runs them on a worker
/// thread. A request waits `debounce` after the latest request for its
/// document; a newer request replaces a waiting one. A result is discarded
/// if a newer request for its document arrived while it ran, so batches for
/// a document are delivered with increasing seq.
class AnalysisPipeline {
 public:
  using Deliver = std::function<void(AnnotationBatch)>;

  AnalysisPipeline(std::unique_ptr<Assistant> assistant, std::chrono::milliseconds debounce,
                   Deliver deliver);
  ~AnalysisPipeline();

  AnalysisPipeline(const AnalysisPipeline&) = delete;
  AnalysisPipeline& operator=(const AnalysisPipeline&) = delete;

  void request(const std::string& doc_id, std::uint64_t seq, Text text);

  /// Blocks until no request is waiting or running.
  void wait_idle();

  /// Number of times the assistant was invoked.
  [[nodiscard]] std::uint64_t invocations() const;

  [[nodiscard]] const Assistant& assistant() const { return *assistant_; }

 private:
  struct Pending {
    std::uint64_t seq = 0;
    Text text;
    std::chrono::steady_clock::time_point due;
  };

  void run();

  std::unique_ptr<Assistant> assistant_;
  std::chrono::milliseconds debounce_;
  Deliver deliver_;

  mutable std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable idle_;
  std::map<std::string, Pending> pending_;
  std::map<std::string, std::uint64_t> delivered_;
  bool busy_ = false;
  bool stop_ = false;
  std::uint64_t invocations_ = 0;
  std::thread worker_;
};

}  // namespace cobra::assist
