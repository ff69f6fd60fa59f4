#include "cobra/assist/pipeline.hpp"

namespace cobra::assist {

AnalysisPipeline::AnalysisPipeline(std::unique_ptr<Assistant> assistant,
                                   std::chrono::milliseconds debounce, Deliver deliver)
    : assistant_(std::move(assistant)), debounce_(debounce), deliver_(std::move(deliver)) {
  worker_ = std::thread([this] { run(); });
}

AnalysisPipeline::~AnalysisPipeline() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  worker_.join();
}

void AnalysisPipeline::request(const std::string& doc_id, std::uint64_t seq, Text text) {
  {
    std::lock_guard lock(mutex_);
    auto [it, fresh] = pending_.try_emplace(doc_id);
    auto& p = it->second;
    if (!fresh && p.seq > seq) return;
    p.seq = seq;
    p.text = std::move(text);
    p.due = std::chrono::steady_clock::now() + debounce_;
  }
  wake_.notify_all();
}

void AnalysisPipeline::wait_idle() {
  std::unique_lock lock(mutex_);
  idle_.wait(lock, [this] { return pending_.empty() && !busy_; });
}

std::uint64_t AnalysisPipeline::invocations() const {
  std::lock_guard lock(mutex_);
  return invocations_;
}

void AnalysisPipeline::run() {
  std::unique_lock lock(mutex_);
  while (true) {
    if (stop_) return;
    if (pending_.empty()) {
      idle_.notify_all();
      wake_.wait(lock);
      continue;
    }
    auto next = pending_.begin();
    for (auto it = pending_.begin(); it != pending_.end(); ++it) {
      if (it->second.due < next->second.due) next = it;
    }
    if (std::chrono::steady_clock::now() < next->second.due) {
      wake_.wait_until(lock, next->second.due);
      continue;
    }
    const std::string doc = next->first;
    Pending job = std::move(next->second);
    pending_.erase(next);
    busy_ = true;
    ++invocations_;
    lock.unlock();
    std::vector<sync::Annotation> result;
    try {
      result = assistant_->analyze(doc, job.text);
    } catch (const std::exception& e) {
      result = {{{0, job.text.size()}, sync::AnnotationKind::error, "assistant", e.what()}};
    }
    lock.lock();
    const bool superseded = pending_.contains(doc);
    auto& last = delivered_[doc];
    if (!superseded && (job.seq >= last)) {
      last = job.seq;
      lock.unlock();
      deliver_({doc, job.seq, std::move(result)});
      lock.lock();
    }
    busy_ = false;
  }
}

}  // namespace cobra::assist
